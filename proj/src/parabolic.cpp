#include "chainpde/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainpde/linalg.hpp"

namespace chainpde {

namespace {
constexpr double kAbsSlack = 1e-10;
}

std::pair<Trajectory, ParabolicReport> solve_U(const Field& zeta,
                                               const Field& u0, double T,
                                               int nt, double cg_rel_tol) {
    require_same_grid(zeta, u0);
    if (!(T > 0.0)) throw PreconditionError("solve_U: time horizon must be positive");
    if (nt < 1) throw PreconditionError("solve_U: need at least one time step");
    for (int i = 0; i < zeta.size(); ++i)
        if (zeta[i] < 0.0)
            throw NegativeZetaError("solve_U: zeta has a negative entry (" +
                                    std::to_string(zeta[i]) + " at interior node " +
                                    std::to_string(i) + ")");

    const Grid& g = *u0.grid;
    const double dt = T / nt;
    auto apply = [&](std::span<const double> in, std::span<double> out) {
        apply_neg_laplacian(g, in, out);
        for (size_t i = 0; i < in.size(); ++i)
            out[i] = in[i] + dt * (out[i] + zeta[static_cast<int>(i)] * in[i]);
    };
    const int cg_max = 10 * g.interior_count() + 100;

    Trajectory traj;
    traj.grid = u0.grid;
    traj.total_time = T;
    traj.states.reserve(static_cast<size_t>(nt) + 1);
    traj.states.push_back(u0);

    std::vector<double> u = u0.values;
    for (int j = 1; j <= nt; ++j) {
        const std::vector<double> rhs = u; // previous state; u is the guess
        const CgResult cg = conjugate_gradient(apply, rhs, u, cg_rel_tol, cg_max);
        if (!cg.converged)
            throw LinearSolveError("solve_U: cg stalled at step " + std::to_string(j) +
                                   " (relative residual " +
                                   std::to_string(cg.relative_residual) + ")");
        traj.states.emplace_back(u0.grid, u);
    }

    ParabolicReport report;
    report.energy = check_energy_estimate(traj, zeta);
    report.energy_pass = std::all_of(report.energy.begin(), report.energy.end(),
                                     [](const CheckTriple& c) { return c.pass; });
    report.max_principle = check_max_principle(traj);
    return {std::move(traj), report};
}

std::vector<CheckTriple> check_energy_estimate(const Trajectory& t,
                                               const Field& zeta) {
    if (t.steps() < 1) throw PreconditionError("energy check: empty trajectory");
    require_same_grid(t.at(0), zeta);
    const double dt = t.dt();
    const double rhs = 0.5 * inner(t.at(0), t.at(0));

    std::vector<CheckTriple> out;
    out.reserve(static_cast<size_t>(t.steps()));
    double dissipated = 0.0;
    for (int j = 1; j <= t.steps(); ++j) {
        const Field& u = t.at(j);
        const double grad = norm_h1_semi(u);
        double zeta_term = 0.0;
        for (int i = 0; i < u.size(); ++i) zeta_term += zeta[i] * u[i] * u[i];
        zeta_term *= u.grid->cell_weight();
        dissipated += dt * (grad * grad + zeta_term);
        const double lhs = 0.5 * inner(u, u) + dissipated;
        out.push_back(make_check(lhs, rhs, 0.0, kAbsSlack));
    }
    return out;
}

CheckTriple check_max_principle(const Trajectory& t) {
    if (t.steps() < 1) throw PreconditionError("max principle check: empty trajectory");
    double worst = 0.0;
    for (int j = 0; j <= t.steps(); ++j)
        worst = std::max(worst, norm_inf(t.at(j)));
    return make_check(worst, norm_inf(t.at(0)), 0.0, kAbsSlack);
}

} // namespace chainpde
