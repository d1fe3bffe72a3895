#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "chainpde/field_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_root() {
    const fs::path p = fs::temp_directory_path() / "chainpde_cli_tests";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    return fs::exists(p) ? chainpde::read_text_file(p.string()) : "";
}

// Runs the installed binary through the shell; env holds optional
// leading VAR=value assignments.
CliResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path dir = scratch_root();
    const fs::path out = dir / ("stdout" + std::to_string(++counter) + ".txt");
    const fs::path err = dir / ("stderr" + std::to_string(counter) + ".txt");
    const std::string cmd = (env.empty() ? "" : env + " ") +
                            std::string(CHAINPDE_CLI_PATH) + " " + args +
                            " > " + out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string write_config(const std::string& name, const std::string& body) {
    const fs::path p = scratch_root() / name;
    chainpde::write_text_atomic(p.string(), body);
    return p.string();
}

std::string solve_config(const std::string& outdir,
                         const std::string& extra = "") {
    return "[domain]\nnodes = [17]\n"
           "[potential]\nname = \"abs_sine\"\n"
           "[u0]\nkind = \"bump\"\n"
           "[run]\nT = 0.5\nnt = 8\noutdir = \"" +
           outdir + "\"\n" + extra;
}

} // namespace

TEST_CASE("cli: version and missing-config diagnostics") {
    CHECK(run_cli("--version").exit_code == 0);
    CHECK(run_cli("--version").out.find("chainpde 1.0.0") != std::string::npos);

    const CliResult r = run_cli("solve --config /nonexistent/x.toml");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);

    // a subcommand is required
    CHECK(run_cli("").exit_code != 0);
}

TEST_CASE("cli: solve writes a report and fields, exit 0 on success") {
    const fs::path outdir = scratch_root() / "solve_ok";
    fs::remove_all(outdir);
    const std::string cfg =
        write_config("solve_ok.toml", solve_config(outdir.string()));

    const CliResult r = run_cli("solve --config " + cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("solve report") != std::string::npos);

    const json doc = json::parse(slurp(outdir / "report.json"));
    CHECK(doc.at("kind") == "solve");
    CHECK(doc.at("converged") == true);
    CHECK(doc.at("checks").at("scheme_residual").at("pass") == true);
    CHECK(doc.at("certificate").at("certified") == true);
    CHECK(doc.at("multistart").is_null());
    CHECK(fs::exists(outdir / "v.csv"));
    // snapshots are named by step index; defaults are t = 0 and t = T
    CHECK(fs::exists(outdir / "u_000.csv"));
    CHECK(fs::exists(outdir / "u_008.csv"));
}

TEST_CASE("cli: multistart block appears when starts are configured") {
    const fs::path outdir = scratch_root() / "solve_multi";
    fs::remove_all(outdir);
    const std::string cfg = write_config(
        "solve_multi.toml",
        solve_config(outdir.string(), "[multistart]\nstarts = 3\n"));

    const CliResult r = run_cli("solve --config " + cfg + " --seed 7");
    CHECK(r.exit_code == 0);
    const json doc = json::parse(slurp(outdir / "report.json"));
    CHECK(doc.at("multistart").at("starts") == 3);
    CHECK(doc.at("multistart").at("converged_count") == 3);
    CHECK(doc.at("multistart").at("runs").size() == 3);
    CHECK(doc.at("multistart").at("dispersion").get<double>() <= 1e-7);
}

TEST_CASE("cli: a starved outer iteration exits 2") {
    const fs::path outdir = scratch_root() / "solve_starved";
    fs::remove_all(outdir);
    const std::string cfg = write_config(
        "solve_starved.toml",
        solve_config(outdir.string(), "[outer]\nmax_iter = 1\n"));
    const CliResult r = run_cli("solve --config " + cfg);
    CHECK(r.exit_code == 2);
    const json doc = json::parse(slurp(outdir / "report.json"));
    CHECK(doc.at("converged") == false);
}

TEST_CASE("cli: outdir precedence is flag over environment over config") {
    const fs::path cfg_dir = scratch_root() / "prec_cfg";
    const fs::path env_dir = scratch_root() / "prec_env";
    const fs::path flag_dir = scratch_root() / "prec_flag";
    for (const fs::path& p : {cfg_dir, env_dir, flag_dir}) fs::remove_all(p);

    const std::string cfg =
        write_config("prec.toml", solve_config(cfg_dir.string()));

    run_cli("solve --config " + cfg, "CHAINPDE_OUTDIR=" + env_dir.string());
    CHECK_FALSE(fs::exists(cfg_dir / "report.json"));
    CHECK(fs::exists(env_dir / "report.json"));

    run_cli("solve --config " + cfg + " --outdir " + flag_dir.string(),
            "CHAINPDE_OUTDIR=" + env_dir.string());
    CHECK(fs::exists(flag_dir / "report.json"));
}

TEST_CASE("cli: render-report reprints a stored document") {
    const fs::path outdir = scratch_root() / "render";
    fs::remove_all(outdir);
    const std::string cfg =
        write_config("render.toml", solve_config(outdir.string()));
    REQUIRE(run_cli("solve --config " + cfg).exit_code == 0);

    const CliResult r =
        run_cli("render-report " + (outdir / "report.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("solve report") != std::string::npos);
    CHECK(r.out.find("scheme_residual") != std::string::npos);

    const std::string bad = write_config("bad.json", "this is not json\n");
    const CliResult rb = run_cli("render-report " + bad);
    CHECK(rb.exit_code == 1);
    CHECK(rb.err.find("error:") != std::string::npos);
}

TEST_CASE("cli: validate-potential emits a JSON verdict") {
    const CliResult ok = run_cli("validate-potential --name abs_sine");
    CHECK(ok.exit_code == 0);
    const json doc = json::parse(ok.out);
    CHECK(doc.at("kind") == "potential");
    CHECK(doc.at("passed") == true);
    CHECK(doc.at("name") == "abs_sine");

    CHECK(run_cli("validate-potential --name nope").exit_code == 1);
}

TEST_CASE("cli: certify-uniqueness splits on the product threshold") {
    const std::string certified = write_config(
        "cert_ok.toml", solve_config((scratch_root() / "c1").string()));
    const CliResult r1 = run_cli("certify-uniqueness --config " + certified);
    CHECK(r1.exit_code == 0);
    const json d1 = json::parse(r1.out);
    CHECK(d1.at("kind") == "certificate");
    CHECK(d1.at("product").get<double>() == doctest::Approx(1.25));
    CHECK(d1.at("certified") == true);

    const std::string uncertified = write_config(
        "cert_bad.toml",
        "[potential]\nname = \"abs_sine\"\n[u0]\nkind = \"bump\"\n"
        "[run]\nT = 1.0\n");
    const CliResult r2 = run_cli("certify-uniqueness --config " + uncertified);
    CHECK(r2.exit_code == 1);
    CHECK(json::parse(r2.out).at("certified") == false);
}

TEST_CASE("cli: oracle runs in both modes") {
    const fs::path outdir = scratch_root() / "oracle_mono";
    fs::remove_all(outdir);
    const std::string cfg =
        write_config("oracle.toml", solve_config(outdir.string()));

    const CliResult mono = run_cli("oracle --config " + cfg);
    CHECK(mono.exit_code == 0);
    const json md = json::parse(slurp(outdir / "report.json"));
    CHECK(md.at("kind") == "monolithic");
    CHECK(fs::exists(outdir / "u_oracle.csv"));

    const fs::path outdir2 = scratch_root() / "oracle_scalar";
    fs::remove_all(outdir2);
    const std::string cfg2 = write_config(
        "oracle2.toml",
        solve_config(outdir2.string(), "[oracle]\nu0 = 1.0\n"));
    const CliResult sc = run_cli("oracle --config " + cfg2 + " --mode scalar");
    CHECK(sc.exit_code == 0);
    const json sd = json::parse(slurp(outdir2 / "report.json"));
    CHECK(sd.at("kind") == "scalar");
    CHECK(sd.at("aggregate").is_number());
}

TEST_CASE("cli: sweep-T tabulates the horizon study") {
    const fs::path outdir = scratch_root() / "sweep";
    fs::remove_all(outdir);
    const std::string cfg =
        write_config("sweep.toml", solve_config(outdir.string()));

    const CliResult r = run_cli("sweep-T --config " + cfg + " --T-list 0.25,0.5");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(outdir / "sweep.csv");
    CHECK(csv.find("T,product,converged,iterations,dispersion") == 0);
    // header + two data rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(r.out.find("T,product,converged") != std::string::npos);

    CHECK(run_cli("sweep-T --config " + cfg + " --T-list -0.5").exit_code == 1);
}
