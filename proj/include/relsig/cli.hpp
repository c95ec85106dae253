#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relsig {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParseError = 2,
    kExitValidationError = 3,
    kExitVerificationFailure = 4,
};

/// Dispatches a full command line (without the program name). Writes results
/// to `out` and diagnostics to `err`; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relsig
