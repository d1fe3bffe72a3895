// Acceptance gate: nine end-to-end criteria, one verdict line each.
// Exit status 0 iff every criterion passes.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "chainpde/config.hpp"
#include "chainpde/elliptic.hpp"
#include "chainpde/errors.hpp"
#include "chainpde/field_io.hpp"
#include "chainpde/fixedpoint.hpp"
#include "chainpde/grid.hpp"
#include "chainpde/oracle.hpp"
#include "chainpde/parabolic.hpp"
#include "chainpde/potential.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace chainpde;

namespace {

std::string g_detail; // failure diagnostics for the current criterion

bool expect(bool ok, const std::string& msg) {
    if (!ok && g_detail.empty()) g_detail = msg;
    return ok;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CHAINPDE_CLI_PATH) + " " + args +
                            " > /dev/null 2> /dev/null";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

fs::path scratch(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / "chainpde_acceptance" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// ---- criterion 1: heat-flow exactness and first-order refinement ----

bool heat_flow_exactness() {
    const double T = 0.5;
    const double exact = std::exp(-std::numbers::pi * std::numbers::pi * T);
    auto probe = [&](int n, int nt, double& scheme_err, double& continuum_err) {
        const GridPtr g = Grid::interval(1.0, n);
        const EigenPair ep = eigenpairs(g, 1)[0];
        const auto [traj, rep] = solve_U(Field::zeros(g), ep.mode, T, nt);
        const double dt = T / nt;
        const double discrete_factor = std::pow(1.0 + dt * ep.value, -nt);
        scheme_err = norm_l2(traj.terminal() - discrete_factor * ep.mode);
        continuum_err = std::abs(inner(traj.terminal(), ep.mode) - exact);
        return rep.all_pass();
    };

    double s0, e0, s1, e1;
    bool ok = expect(probe(65, 64, s0, e0), "base run failed its own checks");
    ok = expect(probe(92, 128, s1, e1), "refined run failed its own checks") && ok;
    ok = expect(s0 <= 1e-10, "scheme error " + num(s0) + " > 1e-10") && ok;
    ok = expect(s1 <= 1e-10, "refined scheme error " + num(s1) + " > 1e-10") && ok;
    const double ratio = e0 / e1;
    ok = expect(ratio >= 1.8 && ratio <= 2.2,
                "error ratio " + num(ratio) + " outside [1.8, 2.2]") &&
         ok;
    return ok;
}

// ---- criterion 2: elliptic a-priori bounds ----

bool elliptic_apriori() {
    std::mt19937_64 rng(1234);
    const GridPtr g = Grid::interval(1.0, 33);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    int passed = 0, total = 0;
    for (const char* name : {"abs", "abs_sine", "sinh_cosh"}) {
        const Potential p = Potential::builtin(name);
        for (int i = 0; i < 100; ++i) {
            Field f = testsupport::random_field(g, rng);
            f = (scale(rng) / norm_l2(f)) * f;
            const auto [v, rep] = solve_V(p, f);
            ++total;
            if (rep.all_pass()) ++passed;
        }
    }
    return expect(passed == total,
                  std::to_string(passed) + "/" + std::to_string(total) +
                      " bound checks passed");
}

// ---- criterion 3: elliptic load stability ----

bool elliptic_stability() {
    std::mt19937_64 rng(77);
    const GridPtr g = Grid::interval(1.0, 33);
    const char* names[] = {"abs", "abs_sine", "sinh_cosh"};
    int passed = 0;
    for (int i = 0; i < 50; ++i) {
        const Potential p = Potential::builtin(names[i % 3]);
        Field f1 = testsupport::random_field(g, rng);
        Field f2 = testsupport::random_field(g, rng);
        f1 = (10.0 / norm_l2(f1)) * f1;
        f2 = (10.0 / norm_l2(f2)) * f2;
        if (check_lipschitz_stability(p, f1, f2).pass) ++passed;
    }
    return expect(passed == 50, std::to_string(passed) + "/50 pairs passed");
}

// ---- criterion 4: parabolic energy estimate and maximum principle ----

bool parabolic_estimates() {
    std::mt19937_64 rng(4321);
    const GridPtr g1 = Grid::interval(1.0, 33);
    const GridPtr g2 = Grid::rectangle(1.0, 0.8, 11, 9);
    int passed = 0, total = 0;
    for (int i = 0; i < 100; ++i) {
        const GridPtr& g = (i % 5 == 4) ? g2 : g1;
        const Field u0 = testsupport::random_field(g, rng, 2.0);
        Field zeta = testsupport::random_field(g, rng, 1.5);
        zeta = zeta.map([](double s) { return s * s; });
        const auto [traj, rep] = solve_U(zeta, u0, 0.3, 12);
        ++total;
        if (rep.all_pass()) ++passed;
    }
    return expect(passed == total,
                  std::to_string(passed) + "/" + std::to_string(total) +
                      " runs passed");
}

// ---- criterion 5: monolithic oracle agreement and refinement ----

bool oracle_agreement() {
    auto distance = [](const Trajectory& a, const Trajectory& b) {
        double d = 0.0;
        for (int j = 0; j <= a.steps(); ++j)
            d = std::max(d, norm_l2(a.at(j) - b.at(j)));
        return d;
    };
    auto make = [](int n, int nt) {
        ProblemSpec spec;
        spec.grid = Grid::interval(1.0, n);
        spec.potential = Potential::builtin("abs");
        spec.u0 = testsupport::bump_field(spec.grid);
        spec.total_time = 0.5;
        spec.time_steps = nt;
        return spec;
    };

    const ProblemSpec base = make(17, 16);
    const Solution sol0 = solve(base);
    bool ok = expect(sol0.converged && sol0.all_checks_pass(),
                     "base compositional solve failed");

    // matched quadrature: agreement at solver-tolerance level
    const auto [right, rrep] = monolithic_solve(base);
    const double d_right = distance(sol0.trajectory, right);
    ok = expect(d_right <= 1e-8,
                "matched-quadrature distance " + num(d_right) + " > 1e-8") &&
         ok;

    // offset quadrature: a genuine O(h + dt) gap that must shrink
    MonolithicOptions left;
    left.quadrature = TimeQuadrature::rectangle_left;
    const auto [l0, l0rep] = monolithic_solve(base, left);
    const double d0 = distance(sol0.trajectory, l0);

    const ProblemSpec fine = make(33, 32);
    const Solution sol1 = solve(fine);
    ok = expect(sol1.converged, "refined compositional solve failed") && ok;
    const auto [l1, l1rep] = monolithic_solve(fine, left);
    const double d1 = distance(sol1.trajectory, l1);

    ok = expect(d0 > 0.0 && d1 > 0.0, "degenerate oracle distances") && ok;
    const double shrink = d0 / d1;
    ok = expect(shrink >= 1.8,
                "refinement shrink " + num(shrink) + " < 1.8 (d0 " + num(d0) +
                    ", d1 " + num(d1) + ")") &&
         ok;
    return ok;
}

// ---- criterion 6: scalar reduction ----

bool scalar_reduction() {
    const ScalarSolution s = scalar_solve(Potential::builtin("abs"), 1.0, 1.0);
    const double invariant =
        std::abs(s.aggregate * s.aggregate - (1.0 - std::exp(-s.aggregate)));
    bool ok = expect(s.residual <= 1e-12,
                     "bisection residual " + num(s.residual) + " > 1e-12");
    ok = expect(invariant <= 1e-12,
                "golden identity off by " + num(invariant)) &&
         ok;

    // independent Picard iteration on the terminal value (w = u0 is a
    // spurious fixed point without diffusion, so start at 0)
    double w = 0.0;
    PicardOptions opts;
    opts.tolerance = 1e-13;
    opts.max_iterations = 1000;
    const PicardOutcome out = picard_fixed_point(
        w, [&](double x) { return std::exp(-std::sqrt(1.0 - x)); },
        [](double prev, double mapped, double a) {
            return (1.0 - a) * prev + a * mapped;
        },
        [](double a, double b) { return std::abs(a - b); }, opts);
    ok = expect(out.converged, "scalar Picard iteration did not converge") && ok;
    const double gap = std::abs(w - s.terminal());
    ok = expect(gap <= 1e-10,
                "Picard/bisection terminal gap " + num(gap) + " > 1e-10") &&
         ok;
    return ok;
}

// ---- criterion 7: certified instance, multistart and growth bound ----

bool certified_instance() {
    ProblemSpec spec;
    spec.grid = Grid::interval(1.0, 33);
    spec.potential = Potential::builtin("abs_sine");
    spec.u0 = testsupport::bump_field(spec.grid);
    spec.total_time = 0.5;
    spec.time_steps = 32;

    const UniquenessCertificate cert = certify_uniqueness(spec);
    bool ok = expect(std::abs(cert.product - 1.25) <= 1e-12 && cert.certified,
                     "certificate product " + num(cert.product));

    const MultistartResult ms = multistart(spec, 5, 20240817);
    ok = expect(ms.converged_count == 5,
                std::to_string(ms.converged_count) + "/5 starts converged") &&
         ok;
    ok = expect(ms.dispersion <= 1e-7,
                "dispersion " + num(ms.dispersion) + " > 1e-7") &&
         ok;
    for (const MultistartRun& run : ms.runs) {
        ok = expect(run.solution.all_checks_pass(),
                    "run " + std::to_string(run.start_index) +
                        " failed a solution check") &&
             ok;
        if (run.solution.contraction_q)
            ok = expect(*run.solution.contraction_q < 1.0,
                        "contraction estimate >= 1") &&
                 ok;
    }
    for (size_t i = 0; i < ms.runs.size(); ++i)
        for (size_t j = i + 1; j < ms.runs.size(); ++j) {
            const CheckTriple c = check_gronwall_bound(
                spec, ms.runs[i].solution, ms.runs[j].solution);
            ok = expect(c.pass, "difference-growth bound failed for starts " +
                                    std::to_string(i) + "," +
                                    std::to_string(j)) &&
                 ok;
        }

    const fs::path outdir = scratch("reference_run");
    const std::string config =
        std::string(CHAINPDE_SOURCE_DIR) + "/configs/reference.toml";
    const int rc = run_cli("solve --config " + config + " --outdir " +
                           outdir.string());
    ok = expect(rc == 0, "reference config run exited " + std::to_string(rc)) &&
         ok;
    ok = expect(fs::exists(outdir / "report.json"),
                "reference run wrote no report") &&
         ok;
    return ok;
}

// ---- criterion 8: trivial fixed points ----

bool trivial_fixed_points() {
    ProblemSpec spec;
    spec.grid = Grid::interval(1.0, 33);
    spec.potential = Potential::builtin("abs_sine");
    spec.u0 = Field::zeros(spec.grid);
    spec.total_time = 0.5;
    spec.time_steps = 16;

    const Solution zero = solve(spec);
    bool ok = expect(zero.converged && zero.iterations == 1 &&
                         norm_inf(zero.w_star) == 0.0 && zero.all_checks_pass(),
                     "zero data did not collapse in one iteration");

    spec.u0 = testsupport::bump_field(spec.grid);
    spec.potential = Potential::builtin("zero");
    const auto [heat, hrep] = solve_U(Field::zeros(spec.grid), spec.u0,
                                      spec.total_time, spec.time_steps);
    const Solution decoupled = solve(spec);
    const double gap = norm_l2(decoupled.w_star - heat.terminal());
    ok = expect(decoupled.converged && decoupled.iterations == 1,
                "decoupled map took " + std::to_string(decoupled.iterations) +
                    " iterations") &&
         ok;
    ok = expect(gap <= 1e-12,
                "decoupled fixed point off the heat terminal by " + num(gap)) &&
         ok;
    ok = expect(decoupled.all_checks_pass(), "decoupled run failed a check") && ok;
    return ok;
}

// ---- criterion 9: deterministic artifacts ----

bool deterministic_artifacts() {
    const fs::path dir_a = scratch("det_a");
    const fs::path dir_b = scratch("det_b");
    const fs::path cfg_path =
        fs::temp_directory_path() / "chainpde_acceptance" / "det.toml";
    write_text_atomic(cfg_path.string(),
                      "[domain]\nnodes = [17]\n"
                      "[potential]\nname = \"abs_sine\"\n"
                      "[u0]\nkind = \"bump\"\n"
                      "[run]\nT = 0.5\nnt = 8\nseed = 99\n"
                      "[multistart]\nstarts = 3\n");

    bool ok = true;
    for (const fs::path& d : {dir_a, dir_b}) {
        const int rc = run_cli("solve --config " + cfg_path.string() +
                               " --outdir " + d.string());
        ok = expect(rc == 0, "solve exited " + std::to_string(rc)) && ok;
    }
    for (const char* name : {"report.json", "v.csv", "u_000.csv", "u_008.csv"}) {
        ok = expect(fs::exists(dir_a / name) && fs::exists(dir_b / name),
                    std::string(name) + " missing") &&
             ok;
        if (!ok) break;
        const std::string a = read_text_file((dir_a / name).string());
        const std::string b = read_text_file((dir_b / name).string());
        ok = expect(a == b, std::string(name) + " differs between runs") && ok;
        ok = expect(!a.empty(), std::string(name) + " is empty") && ok;
    }
    return ok;
}

struct Criterion {
    const char* name;
    std::function<bool()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"heat-flow exactness and first-order refinement", heat_flow_exactness},
        {"elliptic a-priori bounds on 300 random loads", elliptic_apriori},
        {"elliptic load-stability bound on 50 random pairs", elliptic_stability},
        {"parabolic energy estimate and maximum principle on 100 runs",
         parabolic_estimates},
        {"independent monolithic oracle: agreement and refinement",
         oracle_agreement},
        {"scalar reduction: golden identity and Picard cross-check",
         scalar_reduction},
        {"certified instance: multistart agreement and growth bound",
         certified_instance},
        {"trivial fixed points", trivial_fixed_points},
        {"deterministic artifacts for a fixed config and seed",
         deterministic_artifacts},
    };

    bool all = true;
    for (const Criterion& c : criteria) {
        bool ok = false;
        g_detail.clear();
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            g_detail = std::string("exception: ") + e.what();
            ok = false;
        }
        if (ok)
            std::printf("[PASS] %s\n", c.name);
        else
            std::printf("[FAIL] %s%s%s\n", c.name, g_detail.empty() ? "" : ": ",
                        g_detail.c_str());
        all = all && ok;
    }
    return all ? 0 : 1;
}
