#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epigossip {

/// Exit codes of run_cli.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1; // goal failure, absence or exhausted budget
inline constexpr int exit_usage = 2;   // bad arguments or unreadable input

/// Runs one command line (without the program name):
///
///     plan PROBLEM [-o PLAN]
///     verify PROBLEM PLAN [--trace]
///     search PROBLEM --max N [--threads T] [--no-prune] [--budget B]
///     solve-neg PROBLEM [--shortest] [--threads T] [--budget B] [-o PLAN]
///     reduce CNF [-o PROBLEM]
///     stats --mode M --n A..B --d A..B [--verify] [-o CSV]
///     hierarchy LEVEL... [--problem-out FILE] [--plan-out FILE]
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace epigossip
