#pragma once

// Implicit-Euler solver for the linear parabolic problem
//     du/dt - Lap u + zeta u = 0,   u(0) = u0,   u = 0 on the boundary,
// with a time-independent coefficient zeta >= 0.  The backward step
// (I + dt(-Lap + zeta)) u^{j+1} = u^j is solved by conjugate gradients;
// the scheme satisfies the discrete energy estimate and the maximum
// principle unconditionally, which the report checks verify.

#include <utility>
#include <vector>

#include "chainpde/check.hpp"
#include "chainpde/grid.hpp"

namespace chainpde {

struct Trajectory {
    GridPtr grid;
    double total_time = 0.0;
    // nt+1 states; states[0] is the initial field.
    std::vector<Field> states;

    int steps() const { return static_cast<int>(states.size()) - 1; }
    double dt() const { return total_time / steps(); }
    const Field& terminal() const { return states.back(); }
    const Field& at(int j) const { return states[static_cast<size_t>(j)]; }
};

struct ParabolicReport {
    // One entry per step j = 1..nt:
    //   lhs = 0.5|u^j|^2 + sum_{m<=j} dt (|grad u^m|^2 + (zeta u^m, u^m))
    //   rhs = 0.5|u^0|^2
    std::vector<CheckTriple> energy;
    bool energy_pass = false;
    // max_j |u^j|_inf vs |u^0|_inf.
    CheckTriple max_principle;

    bool all_pass() const { return energy_pass && max_principle.pass; }
};

// Advances nt implicit-Euler steps to time T.  zeta must be
// non-negative nodewise (NegativeZetaError otherwise), T positive,
// nt >= 1.
std::pair<Trajectory, ParabolicReport> solve_U(const Field& zeta,
                                               const Field& u0, double T,
                                               int nt,
                                               double cg_rel_tol = 1e-13);

// Discrete energy estimate, 1e-10 absolute slack per step.
std::vector<CheckTriple> check_energy_estimate(const Trajectory& t,
                                               const Field& zeta);

// Maximum principle, 1e-10 absolute slack.
CheckTriple check_max_principle(const Trajectory& t);

} // namespace chainpde
