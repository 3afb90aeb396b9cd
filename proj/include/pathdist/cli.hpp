#pragma once

#include <ostream>

namespace pathdist {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the command-line tool. Returns 0 on success, 1 on a usage
/// error (bad flags, missing files) and 2 on a data error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pathdist
