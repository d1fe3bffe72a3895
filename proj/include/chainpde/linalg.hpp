#pragma once

// Matrix-free conjugate gradients for the SPD stencil systems the
// solvers produce.  Euclidean norms are used internally; relative
// tolerances are insensitive to the constant h-weighting.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "chainpde/errors.hpp"

namespace chainpde {

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

// Solves A x = rhs with x as the initial guess (overwritten).  apply
// must compute out = A in without aliasing.  Throws LinearSolveError on
// a non-positive curvature direction, which an SPD operator cannot
// produce.
template <class Apply>
CgResult conjugate_gradient(Apply&& apply, std::span<const double> rhs,
                            std::vector<double>& x, double rel_tol,
                            int max_iterations) {
    const size_t n = rhs.size();
    if (x.size() != n) throw PreconditionError("cg: size mismatch");

    auto dot = [n](std::span<const double> a, std::span<const double> b) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };

    const double rhs_norm = std::sqrt(dot(rhs, rhs));
    CgResult res;
    if (rhs_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }

    std::vector<double> r(n), p(n), ap(n);
    apply(std::span<const double>(x), std::span<double>(r));
    for (size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    p = r;
    double rr = dot(r, r);

    for (int it = 0; it < max_iterations; ++it) {
        res.relative_residual = std::sqrt(rr) / rhs_norm;
        if (res.relative_residual <= rel_tol) {
            res.converged = true;
            res.iterations = it;
            return res;
        }
        apply(std::span<const double>(p), std::span<double>(ap));
        const double pap = dot(p, ap);
        if (!(pap > 0.0))
            throw LinearSolveError("cg: operator is not positive definite");
        const double alpha = rr / pap;
        for (size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    res.relative_residual = std::sqrt(rr) / rhs_norm;
    res.iterations = max_iterations;
    res.converged = res.relative_residual <= rel_tol;
    return res;
}

} // namespace chainpde
