#include "chainpde/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "chainpde/config.hpp"
#include "chainpde/field_io.hpp"
#include "chainpde/fixedpoint.hpp"
#include "chainpde/oracle.hpp"
#include "chainpde/report_json.hpp"

namespace chainpde {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string resolve_outdir(const std::optional<std::string>& flag,
                           const std::string& configured) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv("CHAINPDE_OUTDIR"); env && *env)
        return env;
    return configured;
}

fs::path prepare_outdir(const std::optional<std::string>& flag,
                        const std::string& configured) {
    const fs::path dir = resolve_outdir(flag, configured);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw FileError("cannot create output directory '" + dir.string() +
                        "': " + ec.message());
    return dir;
}

void write_report(const fs::path& outdir, const json& doc) {
    write_text_atomic((outdir / "report.json").string(), doc.dump(2) + "\n");
}

std::string snapshot_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u_%03d.csv", step);
    return buf;
}

// Maps the configured snapshot times (default {0, T}) to unique step
// indices of the trajectory.
std::vector<int> snapshot_steps(const RunConfig& cfg, const Trajectory& traj) {
    std::vector<double> times = cfg.snapshot_times;
    if (times.empty()) times = {0.0, traj.total_time};
    const double dt = traj.dt();
    std::vector<int> steps;
    for (double t : times) {
        if (!(t >= -1e-12 && t <= traj.total_time * (1.0 + 1e-12)))
            throw ConfigError("snapshot time " + format_g17(t) +
                              " outside [0, T]");
        const int j = std::clamp(static_cast<int>(std::llround(t / dt)), 0,
                                 traj.steps());
        steps.push_back(j);
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

void write_snapshots(const fs::path& outdir, const RunConfig& cfg,
                     const Trajectory& traj) {
    for (int j : snapshot_steps(cfg, traj))
        write_text_atomic((outdir / snapshot_name(j)).string(),
                          field_to_csv(traj.at(j)));
}

TimeQuadrature parse_quadrature(const std::string& name) {
    if (name == "rectangle_right") return TimeQuadrature::rectangle_right;
    if (name == "rectangle_left") return TimeQuadrature::rectangle_left;
    throw ConfigError("config: [oracle].quadrature must be rectangle_right "
                      "or rectangle_left, got '" +
                      name + "'");
}

} // namespace

int run_solve(const SolveArgs& args) {
    RunConfig cfg = RunConfig::parse_file(args.config_path);
    if (args.starts) cfg.starts = *args.starts;
    if (args.seed) cfg.seed = *args.seed;
    const fs::path outdir = prepare_outdir(args.outdir, cfg.outdir);

    const ProblemSpec spec = cfg.make_problem();
    const Solution sol = solve(spec);

    std::optional<MultistartResult> multi;
    if (cfg.starts >= 2) multi = multistart(spec, cfg.starts, cfg.seed);

    const json doc = solve_report_json(spec, sol, multi ? &*multi : nullptr);
    write_report(outdir, doc);
    write_text_atomic((outdir / "v.csv").string(), field_to_csv(sol.v));
    write_snapshots(outdir, cfg, sol.trajectory);
    std::cout << render_report(doc);

    const bool multi_converged =
        !multi || multi->converged_count == static_cast<int>(multi->runs.size());
    if (!sol.converged || !multi_converged) return 2;
    return sol.all_checks_pass() ? 0 : 1;
}

int run_solve_elliptic(const std::string& config_path,
                       const std::optional<std::string>& outdir_flag) {
    RunConfig cfg = RunConfig::parse_file(config_path);
    const fs::path outdir = prepare_outdir(outdir_flag, cfg.outdir);

    const GridPtr g = cfg.make_grid();
    const Potential p = cfg.make_potential();
    const Field f = cfg.make_field(cfg.f, g);
    EllipticSolveOptions opts;
    opts.tolerance = cfg.elliptic_tol;
    opts.max_iterations = cfg.elliptic_max_iterations;
    opts.max_halvings = cfg.elliptic_max_halvings;
    opts.eta_clamp = cfg.eta_clamp;
    opts.cg_rel_tol = cfg.cg_rel_tol;
    opts.check_slack = cfg.check_slack;

    const auto [v, report] = solve_V(p, f, opts);
    const json doc = elliptic_report_json(report);
    write_report(outdir, doc);
    write_text_atomic((outdir / "v.csv").string(), field_to_csv(v));
    std::cout << render_report(doc);
    return report.all_pass() ? 0 : 1;
}

int run_solve_parabolic(const std::string& config_path,
                        const std::optional<std::string>& outdir_flag) {
    RunConfig cfg = RunConfig::parse_file(config_path);
    const fs::path outdir = prepare_outdir(outdir_flag, cfg.outdir);

    const GridPtr g = cfg.make_grid();
    const Field u0 = cfg.make_field(cfg.u0, g);
    const Field zeta = cfg.make_field(cfg.zeta, g);
    const auto [traj, report] =
        solve_U(zeta, u0, cfg.total_time, cfg.time_steps, cfg.cg_rel_tol);

    const json doc = parabolic_report_json(report);
    write_report(outdir, doc);
    write_snapshots(outdir, cfg, traj);
    std::cout << render_report(doc);
    return report.all_pass() ? 0 : 1;
}

int run_oracle(const std::string& config_path, const std::string& mode_flag,
               const std::optional<std::string>& outdir_flag) {
    RunConfig cfg = RunConfig::parse_file(config_path);
    const std::string mode = mode_flag.empty() ? cfg.oracle_mode : mode_flag;
    const fs::path outdir = prepare_outdir(outdir_flag, cfg.outdir);

    json doc;
    if (mode == "monolithic") {
        const ProblemSpec spec = cfg.make_problem();
        MonolithicOptions opts;
        opts.quadrature = parse_quadrature(cfg.oracle_quadrature);
        const auto [traj, report] = monolithic_solve(spec, opts);
        doc = monolithic_report_json(spec, traj, report, opts.quadrature);
        write_text_atomic((outdir / "u_oracle.csv").string(),
                          field_to_csv(traj.terminal()));
    } else if (mode == "scalar") {
        const Potential p = cfg.make_potential();
        const ScalarSolution s = scalar_solve(p, cfg.oracle_u0, cfg.total_time);
        doc = scalar_report_json(s);
    } else {
        throw ConfigError("oracle mode must be monolithic or scalar, got '" +
                          mode + "'");
    }
    write_report(outdir, doc);
    std::cout << render_report(doc);
    return 0;
}

int run_validate_potential(const std::string& name, double lo, double hi,
                           int samples) {
    const Potential p = Potential::builtin(name);
    const ValidationReport report = validate_assumption(p, lo, hi, samples);
    const json doc = validation_report_json(name, report);
    std::cout << doc.dump(2) << "\n";
    return report.passed() ? 0 : 1;
}

int run_certify(const std::string& config_path) {
    const RunConfig cfg = RunConfig::parse_file(config_path);
    const ProblemSpec spec = cfg.make_problem();
    const UniquenessCertificate cert = certify_uniqueness(spec);
    std::cout << certificate_json(cert).dump(2) << "\n";
    return cert.certified ? 0 : 1;
}

int run_sweep(const std::string& config_path, const std::vector<double>& t_list,
              const std::optional<std::string>& outdir_flag) {
    RunConfig cfg = RunConfig::parse_file(config_path);
    if (t_list.empty())
        throw ConfigError("sweep: the horizon list must not be empty");
    const fs::path outdir = prepare_outdir(outdir_flag, cfg.outdir);

    std::string csv = "T,product,converged,iterations,dispersion\n";
    for (double T : t_list) {
        if (!(T > 0.0))
            throw ConfigError("sweep: horizons must be positive, got " +
                              format_g17(T));
        RunConfig point = cfg;
        point.total_time = T;
        const ProblemSpec spec = point.make_problem();
        const UniquenessCertificate cert = certify_uniqueness(spec);

        bool converged = false;
        int iterations = 0;
        std::string dispersion; // empty when no multistart ran
        if (point.starts >= 2) {
            const MultistartResult multi =
                multistart(spec, point.starts, point.seed);
            converged =
                multi.converged_count == static_cast<int>(multi.runs.size());
            for (const auto& r : multi.runs)
                iterations = std::max(iterations, r.solution.iterations);
            dispersion = format_g17(multi.dispersion);
        } else {
            const Solution sol = solve(spec);
            converged = sol.converged;
            iterations = sol.iterations;
        }
        csv += format_g17(T) + "," + format_g17(cert.product) + "," +
               (converged ? "1" : "0") + "," + std::to_string(iterations) +
               "," + dispersion + "\n";
    }
    write_text_atomic((outdir / "sweep.csv").string(), csv);
    std::cout << csv;
    return 0;
}

int run_render_report(const std::string& json_path) {
    const std::string text = read_text_file(json_path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw FileError("cannot parse report '" + json_path +
                        "': " + e.what());
    }
    std::cout << render_report(doc);
    return 0;
}

} // namespace chainpde
