#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixexp::cli {

enum ExitCode : int { ok = 0, check_failed = 1, config_error = 2, compute_error = 3 };

/// Runs one command. args excludes the program name. Results go to --out or
/// to out; diagnostics and usage text go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mixexp::cli
