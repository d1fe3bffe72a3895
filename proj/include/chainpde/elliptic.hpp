#pragma once

// Solver for the semilinear elliptic problem
//     -Lap v + phi(v) v + f = 0,   v = 0 on the boundary,
// by damped Newton iteration.  The monotone nonlinearity
// eta(v) = phi(v) v makes the Jacobian -Lap + diag(eta'(v)) symmetric
// positive definite, so each step is a conjugate-gradient solve.

#include <array>
#include <utility>

#include "chainpde/check.hpp"
#include "chainpde/grid.hpp"
#include "chainpde/potential.hpp"

namespace chainpde {

struct EllipticSolveOptions {
    // Convergence threshold on the h-weighted L2 norm of the residual
    // -Lap v + eta(v) + f.
    double tolerance = 1e-10;
    int max_iterations = 50;
    int max_halvings = 30;
    // eta values are clamped at +-eta_clamp while iterating; a
    // converged solution must stay strictly inside the clamp.
    double eta_clamp = 1e12;
    double cg_rel_tol = 1e-13;
    // Relative slack applied to the a-priori bound checks.
    double check_slack = 0.05;
};

struct EllipticReport {
    int iterations = 0;
    double final_residual = 0.0;
    // gradient bound, load bound, potential bound (see
    // check_apriori_bounds).
    std::array<CheckTriple, 3> apriori;

    bool all_pass() const {
        return apriori[0].pass && apriori[1].pass && apriori[2].pass;
    }
};

// Solves the problem for the given load f.  initial_guess (optional)
// must live on the grid of f; the default start is v = 0, and f = 0
// returns immediately with zero iterations.
std::pair<Field, EllipticReport> solve_V(const Potential& p, const Field& f,
                                         const EllipticSolveOptions& opts = {},
                                         const Field* initial_guess = nullptr);

// The three a-priori estimates satisfied by the continuous solution,
// evaluated on the discrete one:
//   [0]  |grad v|        <= diam(Omega) |f|
//   [1]  |eta(v)|        <= |f|
//   [2]  |phi(v)|^2      <= |f|^2 + gamma * vol(Omega),
//        gamma = max {phi(s)^2 : |s| <= 1}.
std::array<CheckTriple, 3> check_apriori_bounds(const Potential& p,
                                                const Field& f, const Field& v,
                                                double rel_slack = 0.05);

// Solves for f1 and f2 and checks the stability bound
//   |grad (V(f1) - V(f2))| <= diam(Omega) |f1 - f2|.
CheckTriple check_lipschitz_stability(const Potential& p, const Field& f1,
                                      const Field& f2,
                                      const EllipticSolveOptions& opts = {});

} // namespace chainpde
