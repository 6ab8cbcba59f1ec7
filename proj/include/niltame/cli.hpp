#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace niltame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // UNEQUAL or FAIL
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace niltame::cli
