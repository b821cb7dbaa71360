#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "qce/config.hpp"

namespace qce {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidationFailed = 3;

/// Executes one configured run. Results go to config.output.path, or to `out`
/// when the path is empty. Errors propagate as qce::Error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name), runs, and turns any error into a
/// one-line JSON record on `err`.
int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace qce
