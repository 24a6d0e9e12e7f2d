#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netcarta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;  // error diagnostics or a failed operation
inline constexpr int kExitUsage = 2;

// Entry point shared by main() and the tests. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netcarta::cli
