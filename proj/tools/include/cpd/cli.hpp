#pragma once
// Command-line driver, kept in a library so tests can run commands in-process.
//
//   cpd solve PROBLEM.json [solver flags]
//   cpd quartic-bench [--n --m --seeds ...] [solver flags]
//   cpd snl gen [--sensors --dim --range --sigma | --fixture six|twenty] --seed S --out FILE
//   cpd snl solve INSTANCE.json [solver flags]
//
// Exit codes: 0 success, 2 input error, 3 solver failure.

#include <ostream>
#include <string>
#include <vector>

namespace cpd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpd::cli
