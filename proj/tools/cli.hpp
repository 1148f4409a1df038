#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmt::cli {

// Exit codes: certified result, user error, undetermined or stalled, budget exhausted.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUndetermined = 3;
inline constexpr int kExitBudget = 4;

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmt::cli
