#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace drmgfe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one invocation; argv[0] is the program name. Reports go to files
/// under --out, summaries to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace drmgfe::cli
