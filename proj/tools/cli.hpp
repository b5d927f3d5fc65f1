#pragma once

#include <ostream>

namespace coposlab::cli {

// Exit codes shared by every subcommand.
inline constexpr int kPass = 0;
inline constexpr int kNegative = 1;       // certified infeasible or refuted
inline constexpr int kIndeterminate = 2;  // solver gave up or verification failed
inline constexpr int kUsage = 64;         // bad flags or malformed input

// Parses argv, runs one subcommand and writes a JSON report to `out` (or to
// --out). Diagnostics for usage errors also go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coposlab::cli
