#include "chainpde/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainpde/linalg.hpp"

namespace chainpde {

namespace {

double clamp_eta(double v, double bound) {
    return std::clamp(v, -bound, bound);
}

// Residual r = -Lap v + clamped eta(v) + f; returns the h-weighted L2
// norm.
double residual(const Grid& g, const Potential& p, const Field& f,
                const std::vector<double>& v, double eta_clamp,
                std::vector<double>& r) {
    apply_neg_laplacian(g, v, r);
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        r[i] += clamp_eta(p.eta(v[i]), eta_clamp) + f[static_cast<int>(i)];
        s += r[i] * r[i];
    }
    return std::sqrt(g.cell_weight() * s);
}

} // namespace

std::pair<Field, EllipticReport> solve_V(const Potential& p, const Field& f,
                                         const EllipticSolveOptions& opts,
                                         const Field* initial_guess) {
    if (!f.grid) throw PreconditionError("solve_V: load has no grid");
    if (opts.tolerance <= 0.0)
        throw PreconditionError("solve_V: tolerance must be positive");
    const Grid& g = *f.grid;
    const int m = g.interior_count();

    std::vector<double> v(static_cast<size_t>(m), 0.0);
    if (initial_guess) {
        require_same_grid(f, *initial_guess);
        v = initial_guess->values;
    }

    std::vector<double> r(v.size()), diag(v.size()), rhs(v.size()),
        step(v.size()), trial(v.size()), r_trial(v.size());

    EllipticReport report;
    double res = residual(g, p, f, v, opts.eta_clamp, r);
    const int cg_max = 10 * m + 100;

    while (res > opts.tolerance) {
        if (report.iterations >= opts.max_iterations)
            throw NewtonDivergenceError(
                "elliptic newton: no convergence after " +
                std::to_string(opts.max_iterations) +
                " iterations (residual " + std::to_string(res) + ")");

        // Jacobian diag: eta'(v), frozen to 0 where the clamp is active
        // so the operator stays positive semidefinite.
        for (size_t i = 0; i < v.size(); ++i) {
            const double ei = p.eta(v[i]);
            diag[i] = std::abs(ei) >= opts.eta_clamp
                          ? 0.0
                          : std::max(0.0, p.eta_prime(v[i]));
            rhs[i] = -r[i];
        }
        auto apply = [&](std::span<const double> in, std::span<double> out) {
            apply_neg_laplacian(g, in, out);
            for (size_t i = 0; i < in.size(); ++i) out[i] += diag[i] * in[i];
        };
        std::fill(step.begin(), step.end(), 0.0);
        const CgResult cg =
            conjugate_gradient(apply, rhs, step, opts.cg_rel_tol, cg_max);
        if (!cg.converged)
            throw LinearSolveError("elliptic newton: cg stalled at relative residual " +
                                   std::to_string(cg.relative_residual));

        // Backtracking on the residual norm.
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            for (size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + t * step[i];
            const double res_trial =
                residual(g, p, f, trial, opts.eta_clamp, r_trial);
            if (res_trial <= (1.0 - 1e-4 * t) * res) {
                v.swap(trial);
                r.swap(r_trial);
                res = res_trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted)
            throw NewtonDivergenceError(
                "elliptic newton: line search failed to reduce the residual");
        ++report.iterations;
    }

    for (double vi : v)
        if (std::abs(p.eta(vi)) >= opts.eta_clamp)
            throw NumericError(
                "elliptic newton: eta clamp active at the converged solution");

    Field solution(f.grid, std::move(v));
    report.final_residual = res;
    report.apriori = check_apriori_bounds(p, f, solution, opts.check_slack);
    return {std::move(solution), report};
}

std::array<CheckTriple, 3> check_apriori_bounds(const Potential& p,
                                                const Field& f, const Field& v,
                                                double rel_slack) {
    require_same_grid(f, v);
    const Grid& g = *f.grid;
    const double f_norm = norm_l2(f);

    const Field eta_v = v.map([&p](double s) { return p.eta(s); });
    const Field phi_v = v.map([&p](double s) { return p.phi(s); });

    // gamma = max phi^2 over [-1, 1], sampled; kinks included.
    double gamma = 0.0;
    const int gamma_samples = 2001;
    for (int i = 0; i < gamma_samples; ++i) {
        const double s = -1.0 + 2.0 * i / (gamma_samples - 1);
        if (s < p.lo() || s > p.hi()) continue;
        const double ph = p.phi(s);
        gamma = std::max(gamma, ph * ph);
    }
    for (double kx : p.kinks())
        if (kx >= -1.0 && kx <= 1.0 && kx >= p.lo() && kx <= p.hi()) {
            const double ph = p.phi(kx);
            gamma = std::max(gamma, ph * ph);
        }

    std::array<CheckTriple, 3> out;
    out[0] = make_check(norm_h1_semi(v), g.diameter() * f_norm, rel_slack);
    out[1] = make_check(norm_l2(eta_v), f_norm, rel_slack);
    const double phi_sq = inner(phi_v, phi_v);
    out[2] = make_check(phi_sq, f_norm * f_norm + gamma * g.volume(), rel_slack);
    return out;
}

CheckTriple check_lipschitz_stability(const Potential& p, const Field& f1,
                                      const Field& f2,
                                      const EllipticSolveOptions& opts) {
    require_same_grid(f1, f2);
    const auto [v1, r1] = solve_V(p, f1, opts);
    const auto [v2, r2] = solve_V(p, f2, opts);
    const double lhs = norm_h1_semi(v1 - v2);
    const double rhs = f1.grid->diameter() * norm_l2(f1 - f2);
    return make_check(lhs, rhs, opts.check_slack);
}

} // namespace chainpde
