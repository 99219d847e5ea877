#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quiverloop::cli {

// Exit codes: 0 success, 1 domain error, 2 usage error.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace quiverloop::cli
