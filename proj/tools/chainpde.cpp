// chainpde: solver laboratory for the heat equation whose potential is
// driven by the time aggregate of the solution itself.  See README.md
// for the model, the subcommands, and the configuration format.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chainpde/errors.hpp"
#include "chainpde/run.hpp"

namespace {

// "a,b,c" -> {a, b, c}; used for --interval and --T-list so negative
// numbers never fight the option lexer.
std::vector<double> split_doubles(const std::string& text,
                                  const std::string& what) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t comma = text.find(',', pos);
        const std::string token =
            text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            size_t used = 0;
            out.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw chainpde::ConfigError(what + ": cannot parse number '" +
                                        token + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point solver and verification lab for the "
                 "aggregate-coupled heat equation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "chainpde 1.0.0");

    chainpde::SolveArgs solve_args;
    auto* solve =
        app.add_subcommand("solve", "Run the outer fixed-point solver");
    solve->add_option("--config", solve_args.config_path, "Configuration file")
        ->required();
    solve->add_option("--starts", solve_args.starts,
                      "Override [multistart].starts");
    solve->add_option("--seed", solve_args.seed, "Override [run].seed");
    solve->add_option("--outdir", solve_args.outdir, "Output directory");

    std::string elliptic_config;
    std::optional<std::string> elliptic_outdir;
    auto* elliptic = app.add_subcommand(
        "solve-elliptic", "Solve the aggregate equation for the [f] load");
    elliptic->add_option("--config", elliptic_config, "Configuration file")
        ->required();
    elliptic->add_option("--outdir", elliptic_outdir, "Output directory");

    std::string parabolic_config;
    std::optional<std::string> parabolic_outdir;
    auto* parabolic = app.add_subcommand(
        "solve-parabolic",
        "Step the linear equation with the fixed [zeta] coefficient");
    parabolic->add_option("--config", parabolic_config, "Configuration file")
        ->required();
    parabolic->add_option("--outdir", parabolic_outdir, "Output directory");

    std::string oracle_config;
    std::string oracle_mode;
    std::optional<std::string> oracle_outdir;
    auto* oracle = app.add_subcommand(
        "oracle", "Run a reference solver (monolithic or scalar)");
    oracle->add_option("--config", oracle_config, "Configuration file")
        ->required();
    oracle->add_option("--mode", oracle_mode, "monolithic or scalar")
        ->check(CLI::IsMember({"monolithic", "scalar"}));
    oracle->add_option("--outdir", oracle_outdir, "Output directory");

    std::string vp_name;
    std::string vp_interval = "-50,50";
    int vp_samples = 100001;
    auto* validate = app.add_subcommand(
        "validate-potential",
        "Check a built-in potential against the admissibility assumptions");
    validate->add_option("--name", vp_name, "Built-in potential name")
        ->required();
    validate->add_option("--interval", vp_interval,
                         "Sampling interval as \"lo,hi\"");
    validate->add_option("--samples", vp_samples, "Number of uniform samples")
        ->check(CLI::PositiveNumber);

    std::string certify_config;
    auto* certify = app.add_subcommand(
        "certify-uniqueness",
        "Evaluate the uniqueness certificate for a configured problem");
    certify->add_option("--config", certify_config, "Configuration file")
        ->required();

    std::string sweep_config;
    std::string sweep_list;
    std::optional<std::string> sweep_outdir;
    auto* sweep = app.add_subcommand(
        "sweep-T", "Tabulate certificate and convergence across horizons");
    sweep->add_option("--config", sweep_config, "Configuration file")
        ->required();
    sweep->add_option("--T-list", sweep_list, "Horizons as \"T1,T2,...\"")
        ->required();
    sweep->add_option("--outdir", sweep_outdir, "Output directory");

    std::string report_path;
    auto* render = app.add_subcommand(
        "render-report", "Print a report JSON file as a text table");
    render->add_option("report", report_path, "Path to report.json")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return chainpde::run_solve(solve_args);
        if (elliptic->parsed())
            return chainpde::run_solve_elliptic(elliptic_config,
                                                elliptic_outdir);
        if (parabolic->parsed())
            return chainpde::run_solve_parabolic(parabolic_config,
                                                 parabolic_outdir);
        if (oracle->parsed())
            return chainpde::run_oracle(oracle_config, oracle_mode,
                                        oracle_outdir);
        if (validate->parsed()) {
            const auto iv = split_doubles(vp_interval, "--interval");
            if (iv.size() != 2)
                throw chainpde::ConfigError(
                    "--interval expects exactly two numbers \"lo,hi\"");
            return chainpde::run_validate_potential(vp_name, iv[0], iv[1],
                                                    vp_samples);
        }
        if (certify->parsed()) return chainpde::run_certify(certify_config);
        if (sweep->parsed())
            return chainpde::run_sweep(sweep_config,
                                       split_doubles(sweep_list, "--T-list"),
                                       sweep_outdir);
        if (render->parsed()) return chainpde::run_render_report(report_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
}
