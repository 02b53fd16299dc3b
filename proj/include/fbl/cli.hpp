#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fbl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `fbl` binary. `args` excludes the program name.
/// Returns 0 on success, 1 when a check fails (verify, fuzz, search red
/// alert) and 2 on usage, parse or I/O errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fbl::cli
