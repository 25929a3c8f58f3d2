#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diagnoscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`. Returns the process exit code: 0 on success, 1 on
/// domain errors (invalid model, impossible evidence, ...), 2 on usage or
/// parse errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diagnoscope::cli
