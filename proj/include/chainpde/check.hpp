#pragma once

namespace chainpde {

// One verified inequality: lhs <= rhs up to slack.  Every analytic bound
// the solvers assert at runtime is reported in this shape so the CLI can
// print them uniformly.
struct CheckTriple {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// pass <=> lhs <= rhs * (1 + rel_slack) + abs_slack
inline CheckTriple make_check(double lhs, double rhs, double rel_slack,
                              double abs_slack = 0.0) {
    CheckTriple c;
    c.lhs = lhs;
    c.rhs = rhs;
    c.pass = lhs <= rhs * (1.0 + rel_slack) + abs_slack;
    return c;
}

} // namespace chainpde
