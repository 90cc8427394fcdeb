#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace selfsim::cli {

/// Exit codes of the command-line surface.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,   // a check answered "no" or a validation failed
  kUsage = 2,         // bad arguments, unreadable input, unusable preset
  kUndecided = 3,     // a budget ran out before an answer was reached
  kInternal = 4,
};

/// Environment variable naming a JSON file with default options
/// (keys: preset, format, seed, budget, level).
inline constexpr const char* kConfigEnv = "SELFSIM_CONFIG";

/// Runs one invocation. `args` excludes the program name.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace selfsim::cli
