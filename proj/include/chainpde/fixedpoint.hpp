#pragma once

// Outer solver for the global-in-time problem
//     du/dt - Lap u + phi(v) u = 0,   v = integral of u over [0, T],
// posed as a fixed-point equation for the terminal state w = u(T):
//     Psi(w) = terminal of solve_U(phi(V(w - u0)), u0, T),
// where V is the elliptic aggregate solver.  Damped Picard iteration
// on w converges whenever the uniqueness product M K T^2 stays below
// 2 (M = max |phi'| on [-KT, KT], K = |u0|_inf), which
// certify_uniqueness reports.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chainpde/check.hpp"
#include "chainpde/elliptic.hpp"
#include "chainpde/grid.hpp"
#include "chainpde/parabolic.hpp"
#include "chainpde/potential.hpp"

namespace chainpde {

struct ProblemSpec {
    GridPtr grid;
    Potential potential = Potential::builtin("zero");
    Field u0;
    double total_time = 1.0;
    int time_steps = 16;

    // Outer damped-Picard controls.
    double outer_tol = 1e-9;
    int max_outer_iterations = 500;
    double damping = 1.0; // blend weight of the new iterate, in (0, 1]

    EllipticSolveOptions elliptic;
    double cg_rel_tol = 1e-13;
    double check_slack = 0.05;
};

// Reusable damped fixed-point driver: w <- (1-alpha) w + alpha map(w)
// until the step distance drops below the tolerance.  State is any
// value type; blend and distance supply the vector-space structure.
struct PicardOptions {
    double tolerance = 1e-9;
    int max_iterations = 500;
    double damping = 1.0;
};

struct PicardOutcome {
    bool converged = false;
    int iterations = 0;
    std::vector<double> history; // step distance per iteration
};

template <class State, class Map, class Blend, class Distance>
PicardOutcome picard_fixed_point(State& w, Map&& map, Blend&& blend,
                                 Distance&& distance,
                                 const PicardOptions& opts) {
    if (!(opts.tolerance > 0.0))
        throw PreconditionError("picard: tolerance must be positive");
    if (!(opts.damping > 0.0 && opts.damping <= 1.0))
        throw PreconditionError("picard: damping must lie in (0, 1]");
    PicardOutcome out;
    for (int k = 1; k <= opts.max_iterations; ++k) {
        State mapped = map(w);
        State next = blend(w, mapped, opts.damping);
        const double d = distance(next, w);
        out.history.push_back(d);
        w = std::move(next);
        out.iterations = k;
        if (d <= opts.tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

struct UniquenessCertificate {
    double sup_u0 = 0.0;      // K
    double max_slope = 0.0;   // M = max |phi'| on [-KT, KT]
    double time_horizon = 0.0;
    double product = 0.0;     // M K T^2
    bool certified = false;   // product < 2
};

// Extra outputs of one Psi evaluation.
struct PsiBreakdown {
    Field v;     // elliptic aggregate V(w - u0)
    Field zeta;  // phi(v)
    // Set when |w| exceeds the invariant ball |w| <= |u0|; the map is
    // still evaluated.
    bool outside_ball = false;
};

Field psi(const ProblemSpec& spec, const Field& w, PsiBreakdown* info = nullptr);

struct Solution {
    Trajectory trajectory;
    Field w_star;     // converged terminal iterate
    Field v;          // V(w_star - u0)
    Field zeta_star;  // phi(v)

    bool converged = false;
    int iterations = 0;
    std::vector<double> history;
    // max |dw_k| / |dw_{k-1}| over increments after the first three;
    // absent when the run was too short to measure.
    std::optional<double> contraction_q;

    EllipticReport elliptic_report;
    ParabolicReport parabolic_report;

    // |w_star| <= |u0| (1 + 1e-8).
    CheckTriple self_map;
    // |v - dt * sum_j u^j| <= (h + dt) |u0|; rectangle-rule quadrature
    // matched to the implicit-Euler steps.  The measured ratio
    // gap / ((h + dt) |u0|) is reported separately.
    CheckTriple aggregate;
    double aggregate_constant = 0.0;
    // max_j |(u^j - u^{j-1})/dt - Lap u^j + zeta u^j| <= 1e-8.
    CheckTriple scheme_residual;

    UniquenessCertificate certificate;

    bool all_checks_pass() const;
};

// Runs the damped Picard iteration from the heat-equation terminal
// state (phi frozen to zero).  Non-convergence is reported through
// Solution::converged, not an exception; the returned state then holds
// the last iterate for diagnosis.
Solution solve(const ProblemSpec& spec);

// Same, but starting from a caller-supplied terminal iterate.
Solution solve_from(const ProblemSpec& spec, Field w0);

UniquenessCertificate certify_uniqueness(const ProblemSpec& spec);

struct MultistartRun {
    int start_index = 0;
    double initial_norm = 0.0;
    Solution solution;
};

struct MultistartResult {
    std::vector<MultistartRun> runs;
    int converged_count = 0;
    // Max pairwise L2 distance between converged terminal states.
    double dispersion = 0.0;
};

// Runs `starts` independent solves from random terminal states drawn
// inside the invariant ball |w| <= |u0|, deterministically derived
// from the seed.  Runs execute concurrently; results are ordered by
// start index.
MultistartResult multistart(const ProblemSpec& spec, int starts,
                            std::uint64_t seed);

// Difference-growth bound for two solutions of the same problem:
//   |u1(t_j) - u2(t_j)|^2 <= 2 M K xi(T) xi(t_j),
// with xi the trapezoid-rule time integral of |u1 - u2| and M, K from
// the uniqueness certificate.  Differences at or below the solver
// accuracy (outer_tol scaled by the data) are treated as zero via the
// absolute slack; below that scale the two iterates are the same
// solution and the bound carries no information.  Returns the worst
// step; pass means every step satisfied the bound.
CheckTriple check_gronwall_bound(const ProblemSpec& spec, const Solution& a,
                                 const Solution& b);

} // namespace chainpde
