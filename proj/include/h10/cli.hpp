#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace h10::cli {

/// Exit codes: 0 = check passed / output produced, 2 = not established
/// (hypotheses unattested or failed), 1 = error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotEstablished = 2;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace h10::cli
