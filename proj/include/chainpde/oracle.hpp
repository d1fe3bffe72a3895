#pragma once

// Independent reference solvers used to cross-check the compositional
// pipeline.  Neither path reuses the production Newton/CG code: the
// monolithic solver assembles dense matrices over the whole space-time
// unknown and factors them directly, and the scalar reduction is pure
// bracketed bisection.

#include <functional>
#include <utility>

#include "chainpde/fixedpoint.hpp"
#include "chainpde/grid.hpp"
#include "chainpde/parabolic.hpp"
#include "chainpde/potential.hpp"

namespace chainpde {

// Time quadrature used for the nonlocal coupling v(u) = dt * sum u^j.
//   rectangle_right  sums j = 1..nt and is algebraically matched to
//                    the implicit-Euler steps: at a fixed point of the
//                    outer map it reproduces the elliptic aggregate
//                    exactly, so agreement is at solver-tolerance
//                    level.
//   rectangle_left   sums j = 0..nt-1; a deliberately different
//                    discretization of the same integral, offset by
//                    O(dt), for refinement studies of the coupling.
enum class TimeQuadrature { rectangle_right, rectangle_left };

struct MonolithicOptions {
    double newton_tol = 1e-11; // max over steps of the residual L2 norm
    int max_iterations = 60;
    int max_halvings = 30;
    TimeQuadrature quadrature = TimeQuadrature::rectangle_right;
};

struct MonolithicReport {
    int iterations = 0;
    double final_residual = 0.0;
};

// Newton's method on the stacked unknown (u^1, ..., u^nt) of the full
// implicit-Euler system with the nonlocal coefficient phi(v(u)).  The
// dense Jacobian limits the size: interior_count * time_steps <= 10^4.
// Initialized from the heat-equation trajectory.
std::pair<Trajectory, MonolithicReport>
monolithic_solve(const ProblemSpec& spec, const MonolithicOptions& opts = {});

// Evaluates the monolithic residual at an externally computed
// trajectory; returns the max over steps of the residual L2 norm.
double monolithic_residual(const ProblemSpec& spec, const Trajectory& traj,
                           TimeQuadrature quadrature = TimeQuadrature::rectangle_right);

// 0-D reduction for spatially constant data without diffusion: the
// solution is u(t) = u0 exp(-c t) with c = phi(V) and the aggregate V
// solving G(V) = V - u0 (1 - exp(-phi(V) T)) / phi(V) = 0 (limit u0*T
// as phi -> 0).  Solved by bisection on a sign-changing bracket grown
// from [0, u0*T].
struct ScalarSolution {
    double aggregate = 0.0; // V
    double rate = 0.0;      // c = phi(V)
    double u0 = 0.0;
    double total_time = 0.0;
    double residual = 0.0;  // |G(V)|

    double value_at(double t) const;
    double terminal() const { return value_at(total_time); }
};

ScalarSolution scalar_solve(const Potential& p, double u0, double T);

} // namespace chainpde
