#pragma once

#include "mmsbkit/sweep.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mmsb {

/// Exit codes of run_cli.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitNumerical = 3,
};

/// Subcommands: generate, cluster, evaluate, sweep, stats. `args` excludes
/// the program name. Data goes to files or `out`, summaries to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

/// Sweep grid from JSON text. Keys: n, k, n0, rho, tau ("auto" or a number,
/// scalar or list), profile, connectivity, methods, repetitions, seed,
/// threads. Unknown keys and malformed values throw InvalidInput.
SweepConfig parse_sweep_config(std::string_view json_text, const std::string& source);

}  // namespace mmsb
