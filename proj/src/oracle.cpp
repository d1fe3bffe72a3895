#include "chainpde/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace chainpde {

namespace {

// Dense negative Dirichlet Laplacian assembled from the grid geometry
// alone; intentionally independent of the stencil code the production
// solvers use.
Eigen::MatrixXd dense_neg_laplacian(const Grid& g) {
    const int m = g.interior_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
    if (g.dim() == 1) {
        const double ih2 = 1.0 / (g.spacing(0) * g.spacing(0));
        for (int i = 0; i < m; ++i) {
            L(i, i) = 2.0 * ih2;
            if (i > 0) L(i, i - 1) = -ih2;
            if (i < m - 1) L(i, i + 1) = -ih2;
        }
    } else {
        const int mx = g.interior_nodes(0), my = g.interior_nodes(1);
        const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
        const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
        for (int iy = 0; iy < my; ++iy)
            for (int ix = 0; ix < mx; ++ix) {
                const int k = iy * mx + ix;
                L(k, k) = 2.0 * ihx2 + 2.0 * ihy2;
                if (ix > 0) L(k, k - 1) = -ihx2;
                if (ix < mx - 1) L(k, k + 1) = -ihx2;
                if (iy > 0) L(k, k - mx) = -ihy2;
                if (iy < my - 1) L(k, k + mx) = -ihy2;
            }
    }
    return L;
}

struct StackedSystem {
    const ProblemSpec& spec;
    const Eigen::MatrixXd& lap;
    TimeQuadrature quadrature;
    int m;  // interior nodes
    int nt; // time steps
    double dt;

    // v(U)_i = dt * sum over the quadrature window of u^j_i; u^0 is the
    // known initial state.
    Eigen::VectorXd aggregate(const Eigen::VectorXd& stacked,
                              const Eigen::VectorXd& u0) const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
        const int j_lo = quadrature == TimeQuadrature::rectangle_right ? 1 : 0;
        const int j_hi = quadrature == TimeQuadrature::rectangle_right ? nt : nt - 1;
        for (int j = j_lo; j <= j_hi; ++j) {
            if (j == 0)
                v += dt * u0;
            else
                v += dt * stacked.segment((j - 1) * m, m);
        }
        return v;
    }

    // Residual blocks R_j = (u^j - u^{j-1})/dt + Lap u^j + phi(v) u^j.
    Eigen::VectorXd residual(const Eigen::VectorXd& stacked,
                             const Eigen::VectorXd& u0) const {
        const Eigen::VectorXd v = aggregate(stacked, u0);
        Eigen::VectorXd phi_v(m);
        for (int i = 0; i < m; ++i) phi_v(i) = spec.potential.phi(v(i));

        Eigen::VectorXd r(m * nt);
        for (int j = 1; j <= nt; ++j) {
            const auto uj = stacked.segment((j - 1) * m, m);
            const Eigen::VectorXd ujm1 =
                j == 1 ? u0 : Eigen::VectorXd(stacked.segment((j - 2) * m, m));
            r.segment((j - 1) * m, m) =
                (uj - ujm1) / dt + lap * uj + phi_v.cwiseProduct(uj);
        }
        return r;
    }

    // Max over steps of the h-weighted L2 norm of a residual block.
    double residual_norm(const Eigen::VectorXd& r) const {
        const double w = spec.grid->cell_weight();
        double worst = 0.0;
        for (int j = 0; j < nt; ++j)
            worst = std::max(worst, std::sqrt(w * r.segment(j * m, m).squaredNorm()));
        return worst;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& stacked,
                             const Eigen::VectorXd& u0) const {
        const Eigen::VectorXd v = aggregate(stacked, u0);
        Eigen::VectorXd phi_v(m), dphi_v(m);
        for (int i = 0; i < m; ++i) {
            phi_v(i) = spec.potential.phi(v(i));
            dphi_v(i) = spec.potential.dphi(v(i));
        }

        const int n = m * nt;
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
        const int k_lo = quadrature == TimeQuadrature::rectangle_right ? 1 : 0;
        const int k_hi = quadrature == TimeQuadrature::rectangle_right ? nt : nt - 1;
        for (int j = 1; j <= nt; ++j) {
            const int row = (j - 1) * m;
            J.block(row, row, m, m) = lap;
            for (int i = 0; i < m; ++i)
                J(row + i, row + i) += 1.0 / dt + phi_v(i);
            if (j >= 2)
                for (int i = 0; i < m; ++i) J(row + i, row - m + i) -= 1.0 / dt;
            // d v / d u^k = dt for every unknown step k in the window.
            const auto uj = stacked.segment(row, m);
            for (int k = std::max(k_lo, 1); k <= k_hi; ++k) {
                const int col = (k - 1) * m;
                for (int i = 0; i < m; ++i)
                    J(row + i, col + i) += dt * dphi_v(i) * uj(i);
            }
        }
        return J;
    }
};

Eigen::VectorXd to_eigen(const Field& f) {
    Eigen::VectorXd v(f.size());
    for (int i = 0; i < f.size(); ++i) v(i) = f[i];
    return v;
}

} // namespace

std::pair<Trajectory, MonolithicReport>
monolithic_solve(const ProblemSpec& spec, const MonolithicOptions& opts) {
    if (!spec.grid) throw PreconditionError("monolithic_solve: spec has no grid");
    if (!spec.u0.grid || !(*spec.u0.grid == *spec.grid))
        throw GridMismatchError("monolithic_solve: u0 does not live on the spec grid");
    const int m = spec.grid->interior_count();
    const int nt = spec.time_steps;
    if (nt < 1) throw PreconditionError("monolithic_solve: need at least one step");
    if (!(spec.total_time > 0.0))
        throw PreconditionError("monolithic_solve: time horizon must be positive");
    if (static_cast<long>(m) * nt > 10000)
        throw PreconditionError(
            "monolithic_solve: stacked system exceeds the 10^4 unknown cap");

    const Eigen::MatrixXd lap = dense_neg_laplacian(*spec.grid);
    const double dt = spec.total_time / nt;
    const Eigen::VectorXd u0 = to_eigen(spec.u0);

    // Heat-equation initial trajectory: (I + dt Lap) u^j = u^{j-1}.
    Eigen::MatrixXd heat = dt * lap;
    heat.diagonal().array() += 1.0;
    const Eigen::PartialPivLU<Eigen::MatrixXd> heat_lu(heat);
    Eigen::VectorXd stacked(m * nt);
    {
        Eigen::VectorXd u = u0;
        for (int j = 1; j <= nt; ++j) {
            u = heat_lu.solve(u);
            stacked.segment((j - 1) * m, m) = u;
        }
    }

    const StackedSystem sys{spec, lap, opts.quadrature, m, nt, dt};
    MonolithicReport report;
    Eigen::VectorXd r = sys.residual(stacked, u0);
    double res = sys.residual_norm(r);

    while (res > opts.newton_tol) {
        if (report.iterations >= opts.max_iterations)
            throw NewtonDivergenceError(
                "monolithic newton: no convergence after " +
                std::to_string(opts.max_iterations) + " iterations");
        const Eigen::MatrixXd J = sys.jacobian(stacked, u0);
        const Eigen::VectorXd step = J.partialPivLu().solve(-r);
        if (!step.allFinite())
            throw LinearSolveError("monolithic newton: singular jacobian");

        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            const Eigen::VectorXd trial = stacked + t * step;
            const Eigen::VectorXd r_trial = sys.residual(trial, u0);
            const double res_trial = sys.residual_norm(r_trial);
            if (res_trial <= (1.0 - 1e-4 * t) * res) {
                stacked = trial;
                r = r_trial;
                res = res_trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted)
            throw NewtonDivergenceError(
                "monolithic newton: line search failed to reduce the residual");
        ++report.iterations;
    }
    report.final_residual = res;

    Trajectory traj;
    traj.grid = spec.grid;
    traj.total_time = spec.total_time;
    traj.states.reserve(static_cast<size_t>(nt) + 1);
    traj.states.push_back(spec.u0);
    for (int j = 1; j <= nt; ++j) {
        std::vector<double> vals(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) vals[static_cast<size_t>(i)] = stacked((j - 1) * m + i);
        traj.states.emplace_back(spec.grid, std::move(vals));
    }
    return {std::move(traj), report};
}

double monolithic_residual(const ProblemSpec& spec, const Trajectory& traj,
                           TimeQuadrature quadrature) {
    if (!traj.grid || !(*traj.grid == *spec.grid))
        throw GridMismatchError("monolithic_residual: trajectory grid mismatch");
    const int m = spec.grid->interior_count();
    const int nt = traj.steps();
    const Eigen::MatrixXd lap = dense_neg_laplacian(*spec.grid);
    const StackedSystem sys{spec, lap, quadrature, m, nt, traj.dt()};
    Eigen::VectorXd stacked(m * nt);
    for (int j = 1; j <= nt; ++j)
        stacked.segment((j - 1) * m, m) = to_eigen(traj.at(j));
    return sys.residual_norm(sys.residual(stacked, to_eigen(traj.at(0))));
}

double ScalarSolution::value_at(double t) const {
    return u0 * std::exp(-rate * t);
}

ScalarSolution scalar_solve(const Potential& p, double u0, double T) {
    if (!(T > 0.0))
        throw PreconditionError("scalar_solve: time horizon must be positive");

    ScalarSolution out;
    out.u0 = u0;
    out.total_time = T;
    if (u0 == 0.0) {
        out.aggregate = 0.0;
        out.rate = p.phi(0.0);
        out.residual = 0.0;
        return out;
    }

    // G(V) = V - u0 (1 - exp(-phi(V) T)) / phi(V); the c -> 0 limit of
    // the quotient is T, handled through expm1.
    auto G = [&](double V) {
        const double c = p.phi(V);
        const double quotient = c == 0.0 ? T : -std::expm1(-c * T) / c;
        return V - u0 * quotient;
    };

    double a = std::min(0.0, u0 * T);
    double b = std::max(0.0, u0 * T);
    double Ga = G(a), Gb = G(b);
    for (int grow = 0;
         Ga != 0.0 && Gb != 0.0 && (Ga > 0.0) == (Gb > 0.0) && grow < 60;
         ++grow) {
        const double width = std::max(b - a, 1e-6);
        a -= width;
        b += width;
        Ga = G(a);
        Gb = G(b);
    }
    if (Ga == 0.0) {
        b = a;
    } else if (Gb == 0.0) {
        a = b;
    } else if ((Ga > 0.0) == (Gb > 0.0)) {
        throw BracketError("scalar_solve: no sign change; G(" +
                           std::to_string(a) + ")=" + std::to_string(Ga) +
                           ", G(" + std::to_string(b) + ")=" + std::to_string(Gb));
    }

    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b));
         ++it) {
        const double mid = 0.5 * (a + b);
        const double Gm = G(mid);
        if (Gm == 0.0) {
            a = b = mid;
            break;
        }
        if ((Gm > 0.0) == (Gb > 0.0)) {
            b = mid;
            Gb = Gm;
        } else {
            a = mid;
            Ga = Gm;
        }
    }
    out.aggregate = 0.5 * (a + b);
    out.rate = p.phi(out.aggregate);
    out.residual = std::abs(G(out.aggregate));
    return out;
}

} // namespace chainpde
