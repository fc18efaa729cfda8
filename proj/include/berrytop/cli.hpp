#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace berrytop::cli {

/// Exit codes: 0 success, 1 verification failure, 2 input or parse error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace berrytop::cli
