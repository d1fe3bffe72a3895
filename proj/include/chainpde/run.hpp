#pragma once

// Subcommand implementations behind the command-line tool.  Each
// function returns the process exit code:
//   0  the command completed and every requested invariant check passed
//   1  errors (bad input, solver failure) or failed checks
//   2  the outer fixed-point iteration did not converge
//
// File outputs are written atomically (temp file + rename) into the
// output directory, resolved with precedence
//   --outdir flag  >  CHAINPDE_OUTDIR environment variable  >  config.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chainpde {

struct SolveArgs {
    std::string config_path;
    std::optional<int> starts;          // override [multistart].starts
    std::optional<std::uint64_t> seed;  // override [run].seed
    std::optional<std::string> outdir;  // override output directory
};

int run_solve(const SolveArgs& args);
int run_solve_elliptic(const std::string& config_path,
                       const std::optional<std::string>& outdir);
int run_solve_parabolic(const std::string& config_path,
                        const std::optional<std::string>& outdir);

// mode empty = use [oracle].mode from the config.
int run_oracle(const std::string& config_path, const std::string& mode,
               const std::optional<std::string>& outdir);

int run_validate_potential(const std::string& name, double lo, double hi,
                           int samples);

// Prints the certificate JSON; exit 0 iff certified.
int run_certify(const std::string& config_path);

// One row per horizon; the sweep itself always exits 0 when it
// completes (non-convergence at large T is the data being collected).
int run_sweep(const std::string& config_path, const std::vector<double>& t_list,
              const std::optional<std::string>& outdir);

int run_render_report(const std::string& json_path);

} // namespace chainpde
