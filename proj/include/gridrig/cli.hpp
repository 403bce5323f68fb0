#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gridrig::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitMismatch = 2;
inline constexpr int kExitUsage = 64;

/// Runs one command line (without the program name). Reports go to `out`
/// as JSON, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridrig::cli
