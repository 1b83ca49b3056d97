#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmc::cli {

/// Exit codes: 0 success, 1 failed checks or module failure, 2 usage or config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs `rmc <subcommand> --config <path> [--out <dir>] [--seed <u64>]`; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmc::cli
