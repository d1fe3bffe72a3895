#pragma once

// Run configuration: a small TOML-like key-value format.
//
// Grammar (documented subset):
//   - '#' starts a comment anywhere outside a quoted string
//   - '[section]' lines open a section; keys belong to the last
//     opened section
//   - 'key = value' lines assign; values are
//       * numbers          1, -2.5, 1e-9
//       * booleans         true, false
//       * quoted strings   "abs" (no escapes)
//       * arrays           [1.0, 2.0] or ["a", "b"], homogeneous
//   - unknown sections or keys are rejected with the offending name
//
// emit() renders the canonical form: every known section and key in a
// fixed order, floats with 17 significant digits.  parse(emit(c)) == c.

#include <cstdint>
#include <string>
#include <vector>

#include "chainpde/errors.hpp"
#include "chainpde/fixedpoint.hpp"
#include "chainpde/grid.hpp"
#include "chainpde/potential.hpp"

namespace chainpde {

// How to build a grid function: one of the built-in shapes or a CSV
// file produced by the tool.
struct FieldSpec {
    // "zero", "constant", "sine", "eigenmode", "bump", "csv"
    std::string kind = "zero";
    double value = 1.0;              // constant
    std::vector<int> mode = {1};     // sine: per-axis frequency
    int index = 1;                   // eigenmode: rank in the sorted basis
    std::vector<double> center = {}; // bump
    std::vector<double> width = {};  // bump
    std::string path;                // csv

    bool operator==(const FieldSpec&) const = default;
};

struct RunConfig {
    // [domain]
    int dim = 1;
    std::vector<double> extents = {1.0};
    std::vector<int> nodes = {33};

    // [potential]
    std::string potential_name = "abs";
    std::vector<double> table_s;   // only for potential_name == "table"
    std::vector<double> table_phi;

    // [u0], [f], [zeta]
    FieldSpec u0;
    FieldSpec f;
    FieldSpec zeta;

    // [run]
    double total_time = 0.5;
    int time_steps = 16;
    std::uint64_t seed = 0;
    std::string outdir = "out";
    std::vector<double> snapshot_times; // empty = {0, T}

    // [outer]
    double outer_tol = 1e-9;
    int outer_max_iterations = 500;
    double outer_damping = 1.0;

    // [elliptic]
    double elliptic_tol = 1e-10;
    int elliptic_max_iterations = 50;
    int elliptic_max_halvings = 30;
    double eta_clamp = 1e12;

    // [checks]
    double check_slack = 0.05;
    double cg_rel_tol = 1e-13;

    // [multistart]
    int starts = 0; // 0 or 1 = single solve

    // [oracle]
    std::string oracle_mode = "monolithic"; // or "scalar"
    double oracle_u0 = 1.0;                 // scalar mode initial value
    std::string oracle_quadrature = "rectangle_right";

    bool operator==(const RunConfig&) const = default;

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_string(const std::string& text);
    std::string emit() const;

    // Builders; they validate the configured values.
    GridPtr make_grid() const;
    Potential make_potential() const;
    Field make_field(const FieldSpec& fs, const GridPtr& g) const;
    ProblemSpec make_problem() const;
};

} // namespace chainpde
