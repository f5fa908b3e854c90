#pragma once

#include <iosfwd>

namespace ratchet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitOther = 1;

/// ratchet-lab <subcommand> [--config FILE] [--key=value ...] --out DIR
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ratchet
