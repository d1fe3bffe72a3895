#pragma once

// Reaction potentials phi and the admissibility conditions the
// solvers rely on: phi >= 0, phi(0) = 0, and eta(s) = phi(s)*s
// non-decreasing.  Derivative evaluators return one-sided values at
// kinks (right-sided at 0 for the |s|-type built-ins).

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "chainpde/errors.hpp"

namespace chainpde {

struct ValidationReport {
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    int samples = 0;
    double min_phi = 0.0;
    double min_eta_prime = 0.0;
    double max_abs_eta_prime = 0.0;
    // max |phi'| over the interval; the M of the uniqueness product.
    double max_abs_dphi = 0.0;
    double phi_at_zero = 0.0; // only meaningful when 0 lies in the interval
    bool phi_nonneg = false;
    bool eta_prime_nonneg = false;

    bool passed() const { return phi_nonneg && eta_prime_nonneg; }
};

class Potential {
public:
    Potential(std::string name, std::function<double(double)> phi,
              std::function<double(double)> dphi,
              double lo = -std::numeric_limits<double>::infinity(),
              double hi = std::numeric_limits<double>::infinity(),
              std::vector<double> kinks = {});

    // Built-ins: "zero", "abs" (|s|), "square" (s^2),
    // "abs_sine" (2|s| + 3 sin|s|), "sinh_cosh" ((2|s| + sinh|s|)/cosh|s|).
    static Potential builtin(const std::string& name);
    static const std::vector<std::string>& builtin_names();

    // Piecewise-linear potential through (s[i], phi[i]); validity is
    // the knot span, the derivative is the segment slope (right-sided
    // at knots), and every interior knot is a kink.
    static Potential from_table(std::vector<double> s, std::vector<double> phi);

    // Evaluators throw PotentialDomainError outside [lo, hi].
    double phi(double s) const;
    double dphi(double s) const;
    double eta(double s) const { return phi(s) * s; }
    double eta_prime(double s) const { return dphi(s) * s + phi(s); }

    const std::string& name() const { return name_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& kinks() const { return kinks_; }

private:
    std::string name_;
    std::function<double(double)> phi_;
    std::function<double(double)> dphi_;
    double lo_;
    double hi_;
    std::vector<double> kinks_;
};

// Samples phi, eta' and phi' on a uniform grid over [lo, hi] (kinks
// inside the interval are sampled as well) and reports extremes plus
// sign checks.  Sign checks allow -1e-12 of floating-point slack.
// Throws NumericError if any evaluator returns a non-finite value and
// PotentialDomainError if the interval leaves the validity range.
ValidationReport validate_assumption(const Potential& p, double lo, double hi,
                                     int samples);

} // namespace chainpde
