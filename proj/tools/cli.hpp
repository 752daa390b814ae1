#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace teflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitConfigError = 3;

// Runs the teflow command line. `args` excludes the program name. Errors go
// to `err` as a single line prefixed "teflow: error[data]:" or
// "teflow: error[config]:".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teflow::cli
