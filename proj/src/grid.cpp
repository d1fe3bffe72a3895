#include "chainpde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chainpde {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw PreconditionError(msg);
}

} // namespace

Grid::Grid(int dim, std::array<double, 2> extent, std::array<int, 2> nodes)
    : dim_(dim), extent_(extent), nodes_(nodes) {
    for (int a = 0; a < dim_; ++a) {
        require(std::isfinite(extent_[a]) && extent_[a] > 0.0,
                "grid extent must be positive and finite");
        require(nodes_[a] >= 3, "grid needs at least 3 nodes per axis");
        h_[a] = extent_[a] / (nodes_[a] - 1);
    }
    for (int a = dim_; a < 2; ++a) {
        extent_[a] = 0.0;
        nodes_[a] = 0;
        h_[a] = 0.0;
    }
    interior_count_ = nodes_[0] - 2;
    if (dim_ == 2) interior_count_ *= nodes_[1] - 2;
}

GridPtr Grid::interval(double length, int nodes) {
    return GridPtr(new Grid(1, {length, 0.0}, {nodes, 0}));
}

GridPtr Grid::rectangle(double length_x, double length_y, int nodes_x,
                        int nodes_y) {
    return GridPtr(new Grid(2, {length_x, length_y}, {nodes_x, nodes_y}));
}

int Grid::check_axis(int axis) const {
    if (axis < 0 || axis >= dim_)
        throw PreconditionError("axis out of range for grid dimension");
    return axis;
}

double Grid::max_spacing() const {
    double h = h_[0];
    if (dim_ == 2) h = std::max(h, h_[1]);
    return h;
}

double Grid::diameter() const {
    double s = extent_[0] * extent_[0];
    if (dim_ == 2) s += extent_[1] * extent_[1];
    return std::sqrt(s);
}

double Grid::volume() const {
    return dim_ == 1 ? extent_[0] : extent_[0] * extent_[1];
}

double Grid::cell_weight() const {
    return dim_ == 1 ? h_[0] : h_[0] * h_[1];
}

bool Grid::is_boundary(std::array<int, 2> node) const {
    for (int a = 0; a < dim_; ++a) {
        if (node[a] < 0 || node[a] >= nodes_[a])
            throw PreconditionError("node index out of range");
        if (node[a] == 0 || node[a] == nodes_[a] - 1) return true;
    }
    return false;
}

std::array<int, 2> Grid::interior_to_node(int k) const {
    if (k < 0 || k >= interior_count_)
        throw PreconditionError("interior index out of range");
    if (dim_ == 1) return {k + 1, 0};
    const int mx = nodes_[0] - 2;
    return {k % mx + 1, k / mx + 1};
}

int Grid::node_to_interior(std::array<int, 2> node) const {
    if (is_boundary(node))
        throw PreconditionError("node is on the boundary");
    if (dim_ == 1) return node[0] - 1;
    const int mx = nodes_[0] - 2;
    return (node[1] - 1) * mx + (node[0] - 1);
}

bool Grid::operator==(const Grid& other) const {
    if (dim_ != other.dim_) return false;
    for (int a = 0; a < dim_; ++a)
        if (nodes_[a] != other.nodes_[a] || extent_[a] != other.extent_[a])
            return false;
    return true;
}

Field::Field(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw PreconditionError("field requires a grid");
    if (static_cast<int>(values.size()) != grid->interior_count())
        throw PreconditionError("field size does not match grid interior");
    if (!all_finite(*this))
        throw NumericError("field contains non-finite values");
}

Field Field::zeros(const GridPtr& g) {
    return Field(g, std::vector<double>(static_cast<size_t>(g->interior_count()), 0.0));
}

Field Field::map(const std::function<double(double)>& f) const {
    std::vector<double> v(values.size());
    for (size_t i = 0; i < values.size(); ++i) v[i] = f(values[i]);
    return Field(grid, std::move(v));
}

void require_same_grid(const Field& a, const Field& b) {
    if (!a.grid || !b.grid || !(*a.grid == *b.grid))
        throw GridMismatchError("fields live on different grids");
}

bool all_finite(const Field& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.values.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] + b.values[i];
    return Field(a.grid, std::move(v));
}

Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.values.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] - b.values[i];
    return Field(a.grid, std::move(v));
}

Field operator*(double s, const Field& a) {
    std::vector<double> v(a.values.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = s * a.values[i];
    return Field(a.grid, std::move(v));
}

Field add_scaled(const Field& a, double s, const Field& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.values.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] + s * b.values[i];
    return Field(a.grid, std::move(v));
}

double inner(const Field& a, const Field& b) {
    require_same_grid(a, b);
    double s = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return a.grid->cell_weight() * s;
}

double norm_l2(const Field& a) { return std::sqrt(inner(a, a)); }

double norm_inf(const Field& a) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::abs(v));
    return m;
}

double norm_h1_semi(const Field& a) {
    const Grid& g = *a.grid;
    const double w = g.cell_weight();
    double s = 0.0;
    if (g.dim() == 1) {
        const int m = g.interior_count();
        const double h = g.spacing(0);
        double prev = 0.0; // boundary value
        for (int i = 0; i <= m; ++i) {
            const double cur = i < m ? a[i] : 0.0;
            const double d = (cur - prev) / h;
            s += w * d * d;
            prev = cur;
        }
    } else {
        const int mx = g.interior_nodes(0), my = g.interior_nodes(1);
        const double hx = g.spacing(0), hy = g.spacing(1);
        auto val = [&](int ix, int iy) {
            if (ix < 0 || ix >= mx || iy < 0 || iy >= my) return 0.0;
            return a[iy * mx + ix];
        };
        // x-direction edges, one per node pair including boundary jumps
        for (int iy = 0; iy < my; ++iy)
            for (int ix = 0; ix <= mx; ++ix) {
                const double d = (val(ix, iy) - val(ix - 1, iy)) / hx;
                s += w * d * d;
            }
        // y-direction edges
        for (int ix = 0; ix < mx; ++ix)
            for (int iy = 0; iy <= my; ++iy) {
                const double d = (val(ix, iy) - val(ix, iy - 1)) / hy;
                s += w * d * d;
            }
    }
    return std::sqrt(s);
}

void apply_neg_laplacian(const Grid& g, std::span<const double> in,
                         std::span<double> out) {
    if (static_cast<int>(in.size()) != g.interior_count() ||
        static_cast<int>(out.size()) != g.interior_count())
        throw PreconditionError("span size does not match grid interior");
    if (g.dim() == 1) {
        const int m = g.interior_count();
        const double ih2 = 1.0 / (g.spacing(0) * g.spacing(0));
        for (int i = 0; i < m; ++i) {
            const double l = i > 0 ? in[i - 1] : 0.0;
            const double r = i < m - 1 ? in[i + 1] : 0.0;
            out[i] = (2.0 * in[i] - l - r) * ih2;
        }
    } else {
        const int mx = g.interior_nodes(0), my = g.interior_nodes(1);
        const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
        const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
        for (int iy = 0; iy < my; ++iy)
            for (int ix = 0; ix < mx; ++ix) {
                const int k = iy * mx + ix;
                const double c = in[k];
                const double xl = ix > 0 ? in[k - 1] : 0.0;
                const double xr = ix < mx - 1 ? in[k + 1] : 0.0;
                const double yl = iy > 0 ? in[k - mx] : 0.0;
                const double yr = iy < my - 1 ? in[k + mx] : 0.0;
                out[k] = (2.0 * c - xl - xr) * ihx2 + (2.0 * c - yl - yr) * ihy2;
            }
    }
}

Field laplacian_apply(const Field& a) {
    std::vector<double> v(a.values.size());
    apply_neg_laplacian(*a.grid, a.values, v);
    return Field(a.grid, std::move(v));
}

namespace {

// Discrete Dirichlet eigenvalue of mode k on an axis.
double axis_eigenvalue(double h, double extent, int k) {
    const double x = std::sin(0.5 * k * std::numbers::pi * h / extent);
    return 4.0 / (h * h) * x * x;
}

} // namespace

double smallest_eigenvalue(const Grid& g) {
    double lam = axis_eigenvalue(g.spacing(0), g.extent(0), 1);
    if (g.dim() == 2) lam += axis_eigenvalue(g.spacing(1), g.extent(1), 1);
    return lam;
}

std::vector<EigenPair> eigenpairs(const GridPtr& g, int k) {
    if (k < 1 || k > g->interior_count())
        throw PreconditionError("eigenpair count must be in [1, interior_count]");
    struct ModeIdx {
        double value;
        int kx, ky;
    };
    std::vector<ModeIdx> all;
    if (g->dim() == 1) {
        const int m = g->interior_count();
        all.reserve(static_cast<size_t>(m));
        for (int kx = 1; kx <= m; ++kx)
            all.push_back({axis_eigenvalue(g->spacing(0), g->extent(0), kx), kx, 0});
    } else {
        const int mx = g->interior_nodes(0), my = g->interior_nodes(1);
        all.reserve(static_cast<size_t>(mx) * static_cast<size_t>(my));
        for (int ky = 1; ky <= my; ++ky)
            for (int kx = 1; kx <= mx; ++kx)
                all.push_back({axis_eigenvalue(g->spacing(0), g->extent(0), kx) +
                                   axis_eigenvalue(g->spacing(1), g->extent(1), ky),
                               kx, ky});
    }
    std::sort(all.begin(), all.end(), [](const ModeIdx& a, const ModeIdx& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.kx != b.kx) return a.kx < b.kx;
        return a.ky < b.ky;
    });

    std::vector<EigenPair> out;
    out.reserve(static_cast<size_t>(k));
    const double pi = std::numbers::pi;
    for (int r = 0; r < k; ++r) {
        const ModeIdx mi = all[static_cast<size_t>(r)];
        Field mode = Field::from_function(g, [&](double x, double y) {
            double v = std::sqrt(2.0 / g->extent(0)) *
                       std::sin(mi.kx * pi * x / g->extent(0));
            if (g->dim() == 2)
                v *= std::sqrt(2.0 / g->extent(1)) *
                     std::sin(mi.ky * pi * y / g->extent(1));
            return v;
        });
        out.push_back({mi.value, std::move(mode)});
    }
    return out;
}

} // namespace chainpde
