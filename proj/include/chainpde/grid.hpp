#pragma once

// Uniform finite-difference grids on intervals and axis-aligned
// rectangles with homogeneous Dirichlet boundary data.  Fields store
// interior node values only; the boundary is identically zero.  All
// integral quantities use the h-weighted discrete L2 inner product,
// which coincides with the trapezoid rule because the boundary
// vanishes.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "chainpde/errors.hpp"

namespace chainpde {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class Grid {
public:
    // 1-D open interval (0, length) sampled with `nodes` equispaced
    // nodes including both boundary nodes.  nodes >= 3.
    static GridPtr interval(double length, int nodes);

    // 2-D open rectangle (0, length_x) x (0, length_y).
    static GridPtr rectangle(double length_x, double length_y,
                             int nodes_x, int nodes_y);

    int dim() const { return dim_; }
    int nodes(int axis) const { return nodes_[check_axis(axis)]; }
    double extent(int axis) const { return extent_[check_axis(axis)]; }
    double spacing(int axis) const { return h_[check_axis(axis)]; }
    int interior_nodes(int axis) const { return nodes(axis) - 2; }
    int interior_count() const { return interior_count_; }

    // Largest per-axis spacing; used in refinement bounds of the form
    // C * (h + dt).
    double max_spacing() const;

    // Euclidean diameter of the continuous box.
    double diameter() const;

    // Lebesgue measure of the box.
    double volume() const;

    // Quadrature weight of one interior node: h in 1-D, hx*hy in 2-D.
    double cell_weight() const;

    // Node indices run 0..nodes(axis)-1 per axis; a node is boundary
    // iff some index sits on the face of the index box.  For 1-D pass
    // {i, 0}.
    bool is_boundary(std::array<int, 2> node) const;

    // Interior nodes carry a linear index 0..interior_count()-1,
    // x-fastest in 2-D.
    std::array<int, 2> interior_to_node(int k) const;
    int node_to_interior(std::array<int, 2> node) const;

    double coordinate(int axis, int node_index) const {
        return node_index * h_[check_axis(axis)];
    }

    // Structural equality; fields on equal grids are compatible.
    bool operator==(const Grid& other) const;

private:
    Grid(int dim, std::array<double, 2> extent, std::array<int, 2> nodes);
    int check_axis(int axis) const;

    int dim_;
    std::array<double, 2> extent_;
    std::array<int, 2> nodes_;
    std::array<double, 2> h_;
    int interior_count_;
};

// Interior node values of a grid function that vanishes on the
// boundary.  Construction validates finiteness; the solver operations
// treat fields as immutable values.
struct Field {
    GridPtr grid;
    std::vector<double> values;

    Field() = default;
    Field(GridPtr g, std::vector<double> v);

    static Field zeros(const GridPtr& g);

    // f receives node coordinates (x, y); y is 0 on 1-D grids.
    template <class F>
    static Field from_function(const GridPtr& g, F&& f) {
        std::vector<double> v(static_cast<size_t>(g->interior_count()));
        for (int k = 0; k < g->interior_count(); ++k) {
            const auto node = g->interior_to_node(k);
            const double x = g->coordinate(0, node[0]);
            const double y = g->dim() == 2 ? g->coordinate(1, node[1]) : 0.0;
            v[static_cast<size_t>(k)] = f(x, y);
        }
        return Field(g, std::move(v));
    }

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int k) const { return values[static_cast<size_t>(k)]; }
    double& operator[](int k) { return values[static_cast<size_t>(k)]; }

    // Returns a field with f applied nodewise.
    Field map(const std::function<double(double)>& f) const;
};

// Throws GridMismatchError unless both fields live on structurally
// equal grids.
void require_same_grid(const Field& a, const Field& b);

bool all_finite(const Field& f);

// Nodewise arithmetic (new fields; operands untouched).
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
// a + s*b
Field add_scaled(const Field& a, double s, const Field& b);

// h-weighted discrete L2 inner product (trapezoid-consistent).
double inner(const Field& a, const Field& b);
double norm_l2(const Field& a);
double norm_inf(const Field& a);

// |grad a| in L2 via forward differences, boundary jumps included.
// Satisfies inner(laplacian_apply(a), a) == norm_h1_semi(a)^2.
double norm_h1_semi(const Field& a);

// Matrix-free application of the (negative) Dirichlet Laplacian
// stencil: out = (-Lap_h) in.  Spans must have interior_count()
// entries.
void apply_neg_laplacian(const Grid& g, std::span<const double> in,
                         std::span<double> out);

// Field wrapper around apply_neg_laplacian.
Field laplacian_apply(const Field& a);

struct EigenPair {
    double value = 0.0;
    Field mode;
};

// The k smallest Dirichlet eigenpairs of the five-point (three-point)
// negative Laplacian, in closed form: sine modes, orthonormal in the
// h-weighted inner product, eigenvalues ascending (ties broken by mode
// index for determinism).  k <= interior_count().
std::vector<EigenPair> eigenpairs(const GridPtr& g, int k);

// Smallest eigenvalue, 2/h^2*(1-cos(pi*h/L)) summed over axes.
double smallest_eigenvalue(const Grid& g);

} // namespace chainpde
