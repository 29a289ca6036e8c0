#pragma once

#include <ostream>

namespace casimir::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFlagged = 2;
inline constexpr int kExitUsage = 64;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace casimir::app
