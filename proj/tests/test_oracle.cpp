#include "doctest.h"

#include <cmath>

#include "chainpde/errors.hpp"
#include "chainpde/fixedpoint.hpp"
#include "chainpde/grid.hpp"
#include "chainpde/oracle.hpp"
#include "chainpde/parabolic.hpp"
#include "chainpde/potential.hpp"
#include "test_support.hpp"

using namespace chainpde;

namespace {

ProblemSpec small_spec(const char* potential, int nodes, int nt) {
    ProblemSpec spec;
    spec.grid = Grid::interval(1.0, nodes);
    spec.potential = Potential::builtin(potential);
    spec.u0 = testsupport::bump_field(spec.grid);
    spec.total_time = 0.5;
    spec.time_steps = nt;
    return spec;
}

} // namespace

TEST_CASE("scalar reduction: absolute-value potential, unit data") {
    // V solves V = (1 - exp(-V)), i.e. V^2 = 1 - exp(-V).
    const ScalarSolution s = scalar_solve(Potential::builtin("abs"), 1.0, 1.0);
    CHECK(s.residual <= 1e-12);
    CHECK(std::abs(s.aggregate * s.aggregate -
                   (1.0 - std::exp(-s.aggregate))) <= 1e-12);
    CHECK(s.aggregate == doctest::Approx(0.7146).epsilon(1e-3));
    CHECK(s.rate == s.aggregate); // phi = |.| and V > 0
    CHECK(s.value_at(0.0) == 1.0);
    CHECK(s.terminal() ==
          doctest::Approx(std::exp(-s.rate)).epsilon(1e-14));
}

TEST_CASE("scalar reduction: vanishing potential integrates exactly") {
    const ScalarSolution s = scalar_solve(Potential::builtin("zero"), 2.5, 1.5);
    CHECK(s.aggregate == 2.5 * 1.5);
    CHECK(s.rate == 0.0);
    CHECK(s.residual == 0.0);
    CHECK(s.terminal() == 2.5);
    CHECK(s.value_at(0.7) == 2.5);
}

TEST_CASE("scalar reduction: symmetry and trivial data") {
    const Potential p = Potential::builtin("abs");
    const ScalarSolution plus = scalar_solve(p, 1.0, 1.0);
    const ScalarSolution minus = scalar_solve(p, -1.0, 1.0);
    // phi even makes the problem odd in u0
    CHECK(std::abs(plus.aggregate + minus.aggregate) <= 1e-12);
    CHECK(minus.aggregate < 0.0);

    const ScalarSolution zero = scalar_solve(p, 0.0, 2.0);
    CHECK(zero.aggregate == 0.0);
    CHECK(zero.residual == 0.0);
    CHECK(zero.terminal() == 0.0);

    CHECK_THROWS_AS(scalar_solve(p, 1.0, 0.0), PreconditionError);
}

TEST_CASE("scalar reduction agrees with a Picard iteration on the terminal value") {
    // Independent route: eta(V) = u0 - w inverts to V = sqrt(u0 - w) for
    // phi = |.| and 0 <= w <= u0, and the terminal map is
    // w <- u0 exp(-phi(V) T).  Without diffusion w = u0 is a spurious
    // fixed point of that map (phi(V) = 0 there), so start below it.
    const double u0 = 1.0, T = 1.0;
    double w = 0.0;
    PicardOptions opts;
    opts.tolerance = 1e-13;
    opts.max_iterations = 1000;
    const PicardOutcome out = picard_fixed_point(
        w,
        [&](double x) {
            const double v = std::sqrt(u0 - x);
            return u0 * std::exp(-v * T);
        },
        [](double prev, double mapped, double a) {
            return (1.0 - a) * prev + a * mapped;
        },
        [](double a, double b) { return std::abs(a - b); }, opts);
    REQUIRE(out.converged);

    const ScalarSolution s = scalar_solve(Potential::builtin("abs"), u0, T);
    CHECK(std::abs(w - s.terminal()) <= 1e-10);
    CHECK(std::abs(std::sqrt(u0 - w) - s.aggregate) <= 1e-10);
}

TEST_CASE("monolithic solve with vanishing potential is the heat flow") {
    const ProblemSpec spec = small_spec("zero", 17, 8);
    const auto [mono, rep] = monolithic_solve(spec);
    CHECK(rep.final_residual <= 1e-11);
    CHECK(rep.iterations <= 1);

    const auto [heat, hrep] = solve_U(Field::zeros(spec.grid), spec.u0,
                                      spec.total_time, spec.time_steps);
    REQUIRE(mono.steps() == heat.steps());
    for (int j = 0; j <= mono.steps(); ++j)
        CHECK(norm_l2(mono.at(j) - heat.at(j)) <= 1e-11);
}

TEST_CASE("monolithic and compositional solvers agree at the fixed point") {
    const ProblemSpec spec = small_spec("abs", 17, 16);
    const Solution sol = solve(spec);
    REQUIRE(sol.converged);

    // the compositional solution satisfies the monolithic equations
    CHECK(monolithic_residual(spec, sol.trajectory) <= 1e-7);

    const auto [mono, rep] = monolithic_solve(spec);
    CHECK(rep.final_residual <= 1e-11);
    CHECK(rep.iterations <= 10);
    CHECK(norm_l2(mono.terminal() - sol.w_star) <= 1e-8);
    for (int j = 0; j <= mono.steps(); ++j)
        CHECK(norm_l2(mono.at(j) - sol.trajectory.at(j)) <= 1e-8);
}

TEST_CASE("the two time quadratures differ by a first-order offset") {
    const ProblemSpec spec = small_spec("abs_sine", 17, 16);
    MonolithicOptions right;
    MonolithicOptions left;
    left.quadrature = TimeQuadrature::rectangle_left;
    const auto [tr, rr] = monolithic_solve(spec, right);
    const auto [tl, rl] = monolithic_solve(spec, left);
    const double gap = norm_l2(tr.terminal() - tl.terminal());
    CHECK(gap >= 1e-7); // genuinely different discretizations
    CHECK(gap <= 1e-2); // but consistent to first order

    // each is self-consistent under its own quadrature
    CHECK(monolithic_residual(spec, tr, TimeQuadrature::rectangle_right) <=
          1e-10);
    CHECK(monolithic_residual(spec, tl, TimeQuadrature::rectangle_left) <=
          1e-10);
    // and inconsistent under the other one
    CHECK(monolithic_residual(spec, tl, TimeQuadrature::rectangle_right) >=
          1e-7);
}

TEST_CASE("monolithic solve in two dimensions") {
    ProblemSpec spec;
    spec.grid = Grid::rectangle(1.0, 0.8, 7, 7);
    spec.potential = Potential::builtin("abs");
    spec.u0 = testsupport::bump_field(spec.grid);
    spec.total_time = 0.5;
    spec.time_steps = 8;

    const Solution sol = solve(spec);
    REQUIRE(sol.converged);
    const auto [mono, rep] = monolithic_solve(spec);
    CHECK(norm_l2(mono.terminal() - sol.w_star) <= 1e-8);
}

TEST_CASE("monolithic argument validation") {
    ProblemSpec spec = small_spec("abs", 803, 16); // 801 * 16 > 10^4
    CHECK_THROWS_AS(monolithic_solve(spec), PreconditionError);

    ProblemSpec bad = small_spec("abs", 17, 16);
    bad.total_time = -1.0;
    CHECK_THROWS_AS(monolithic_solve(bad), PreconditionError);

    const ProblemSpec ok = small_spec("abs", 17, 8);
    const auto [traj, rep] = monolithic_solve(ok);
    ProblemSpec other = ok;
    other.grid = Grid::interval(1.0, 33);
    other.u0 = testsupport::bump_field(other.grid);
    CHECK_THROWS_AS(monolithic_residual(other, traj), GridMismatchError);
}
