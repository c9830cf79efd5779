#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fomlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `fomlab` command line (without the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fomlab
