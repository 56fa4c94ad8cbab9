#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iotids::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInfeasible = 4;

// Runs one subcommand. `args` excludes the program name. Human-readable
// progress goes to `out`; failures are reported on `err` as a JSON document.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iotids::cli
