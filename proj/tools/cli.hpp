#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vibrelab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs the vibrelab command line. args[0] is the program name. Output goes to
/// `out`; every failure prints one "error: <Code>: <text>" line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vibrelab::cli
