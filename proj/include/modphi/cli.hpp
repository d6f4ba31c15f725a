#pragma once

#include <ostream>

namespace modphi::cli {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

/// Parses argv, runs one subcommand and writes its report to `out` (or to the
/// --output file). Diagnostics go to `err` as a single line. Returns the exit
/// status: 0 on success, 2 on validation or domain errors, 3 when a numerical
/// budget is exhausted, 1 for anything unexpected.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modphi::cli
