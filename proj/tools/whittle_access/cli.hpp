#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace whittle::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  ///< `verify` found a violation, or an unexpected error
  kUsage = 2,        ///< bad flags or config schema violation
  kNumericGuard = 3, ///< invalid channel parameters
  kTooLarge = 4,     ///< exhaustive oracle size limits
};

/// Entry point of `whittle-access`; args exclude the program name.
/// Tables go to --out when given, otherwise to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace whittle::cli
