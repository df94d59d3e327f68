#pragma once

#include <ostream>

namespace rumour {

/// Exit codes: 0 success, 1 configuration or usage error, 2 invariant failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInvariant = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Invariant suite over the homogeneous catalog; returns the failure count.
int run_selftest(std::ostream& out);

}  // namespace rumour
