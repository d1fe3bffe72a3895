#include "chainpde/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chainpde {

namespace {

double sgn_right(double s) { return s >= 0.0 ? 1.0 : -1.0; }

// (2a + sinh a)/cosh a and its derivative in a, written with sech to
// stay finite for large a.
double sinh_cosh_val(double a) {
    return 2.0 * a / std::cosh(a) + std::tanh(a);
}

double sinh_cosh_slope(double a) {
    const double sech = 1.0 / std::cosh(a);
    return sech * (2.0 + sech - 2.0 * a * std::tanh(a));
}

} // namespace

Potential::Potential(std::string name, std::function<double(double)> phi,
                     std::function<double(double)> dphi, double lo, double hi,
                     std::vector<double> kinks)
    : name_(std::move(name)), phi_(std::move(phi)), dphi_(std::move(dphi)),
      lo_(lo), hi_(hi), kinks_(std::move(kinks)) {
    if (!phi_ || !dphi_)
        throw PreconditionError("potential requires phi and dphi evaluators");
    if (!(lo_ < hi_))
        throw PreconditionError("potential validity interval is empty");
}

const std::vector<std::string>& Potential::builtin_names() {
    static const std::vector<std::string> names = {"zero", "abs", "square",
                                                   "abs_sine", "sinh_cosh"};
    return names;
}

Potential Potential::builtin(const std::string& name) {
    if (name == "zero")
        return Potential("zero", [](double) { return 0.0; },
                         [](double) { return 0.0; });
    if (name == "abs")
        return Potential("abs", [](double s) { return std::abs(s); },
                         [](double s) { return sgn_right(s); },
                         -std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity(), {0.0});
    if (name == "square")
        return Potential("square", [](double s) { return s * s; },
                         [](double s) { return 2.0 * s; });
    if (name == "abs_sine")
        return Potential(
            "abs_sine",
            [](double s) {
                const double a = std::abs(s);
                return 2.0 * a + 3.0 * std::sin(a);
            },
            [](double s) { return sgn_right(s) * (2.0 + 3.0 * std::cos(s)); },
            -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), {0.0});
    if (name == "sinh_cosh")
        return Potential(
            "sinh_cosh",
            [](double s) { return sinh_cosh_val(std::abs(s)); },
            [](double s) { return sgn_right(s) * sinh_cosh_slope(std::abs(s)); },
            -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), {0.0});
    throw PreconditionError("unknown built-in potential '" + name + "'");
}

Potential Potential::from_table(std::vector<double> s, std::vector<double> phi) {
    if (s.size() != phi.size())
        throw PreconditionError("table potential: knot/value size mismatch");
    if (s.size() < 2)
        throw PreconditionError("table potential needs at least 2 knots");
    for (size_t i = 0; i + 1 < s.size(); ++i)
        if (!(s[i] < s[i + 1]))
            throw PreconditionError("table potential knots must be strictly increasing");
    for (size_t i = 0; i < s.size(); ++i)
        if (!std::isfinite(s[i]) || !std::isfinite(phi[i]))
            throw PreconditionError("table potential entries must be finite");

    const double lo = s.front(), hi = s.back();
    std::vector<double> kinks(s.begin() + 1, s.end() - 1);

    auto segment = [s](double x) {
        // Largest i with s[i] <= x; x == s.back() uses the last segment.
        auto it = std::upper_bound(s.begin(), s.end(), x);
        size_t i = static_cast<size_t>(it - s.begin());
        if (i > 0) --i;
        if (i + 1 >= s.size()) i = s.size() - 2;
        return i;
    };
    auto value = [s, phi, segment](double x) {
        const size_t i = segment(x);
        const double t = (x - s[i]) / (s[i + 1] - s[i]);
        return phi[i] + t * (phi[i + 1] - phi[i]);
    };
    auto slope = [s, phi, segment](double x) {
        const size_t i = segment(x);
        return (phi[i + 1] - phi[i]) / (s[i + 1] - s[i]);
    };
    return Potential("table", value, slope, lo, hi, std::move(kinks));
}

double Potential::phi(double s) const {
    if (s < lo_ || s > hi_) {
        std::ostringstream os;
        os << "potential '" << name_ << "' evaluated at s=" << s
           << " outside validity interval [" << lo_ << ", " << hi_ << "]";
        throw PotentialDomainError(os.str());
    }
    return phi_(s);
}

double Potential::dphi(double s) const {
    if (s < lo_ || s > hi_) {
        std::ostringstream os;
        os << "potential '" << name_ << "' derivative at s=" << s
           << " outside validity interval [" << lo_ << ", " << hi_ << "]";
        throw PotentialDomainError(os.str());
    }
    return dphi_(s);
}

ValidationReport validate_assumption(const Potential& p, double lo, double hi,
                                     int samples) {
    if (!(lo < hi))
        throw PreconditionError("validation interval is empty");
    if (samples < 2)
        throw PreconditionError("validation needs at least 2 samples");

    std::vector<double> pts;
    pts.reserve(static_cast<size_t>(samples) + p.kinks().size());
    for (int i = 0; i < samples; ++i)
        pts.push_back(lo + (hi - lo) * i / (samples - 1));
    for (double k : p.kinks())
        if (k >= lo && k <= hi) pts.push_back(k);

    ValidationReport r;
    r.interval_lo = lo;
    r.interval_hi = hi;
    r.samples = samples;
    r.min_phi = std::numeric_limits<double>::infinity();
    r.min_eta_prime = std::numeric_limits<double>::infinity();

    for (double s : pts) {
        const double ph = p.phi(s);
        const double dp = p.dphi(s);
        const double ep = dp * s + ph;
        if (!std::isfinite(ph) || !std::isfinite(dp) || !std::isfinite(ep)) {
            std::ostringstream os;
            os << "potential '" << p.name() << "' returned a non-finite value at s=" << s;
            throw NumericError(os.str());
        }
        r.min_phi = std::min(r.min_phi, ph);
        r.min_eta_prime = std::min(r.min_eta_prime, ep);
        r.max_abs_eta_prime = std::max(r.max_abs_eta_prime, std::abs(ep));
        r.max_abs_dphi = std::max(r.max_abs_dphi, std::abs(dp));
    }
    if (lo <= 0.0 && 0.0 <= hi) r.phi_at_zero = p.phi(0.0);

    constexpr double sign_slack = 1e-12;
    r.phi_nonneg = r.min_phi >= -sign_slack;
    r.eta_prime_nonneg = r.min_eta_prime >= -sign_slack;
    return r;
}

} // namespace chainpde
