#pragma once

#include <map>
#include <string>
#include <vector>

namespace popper {

/// Parse `spec` in the grid grammar  start:stop:lin|log:count  (a bare
/// number is a one-point grid; "inf" is allowed as a bare value when
/// `allow_inf` is set). Throws domain_error on malformed input.
std::vector<double> parse_grid(const std::string& spec, bool allow_inf = false);

/// Batch front end. `args` are the command-line arguments without the
/// program name; `env` is the process environment (POPPER_THREADS caps
/// worker parallelism). Returns the process exit code:
///   0 success, 1 validation error, 2 numerical non-convergence or failed
///   verification, 3 I/O failure.
/// Flags override the --config file, which overrides built-in defaults.
int run_cli(const std::vector<std::string>& args,
            const std::map<std::string, std::string>& env);

} // namespace popper
