#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace beg::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kRuntimeError = 2 };

/// "lo:hi:step" (inclusive, values lo + i*step) or a comma list.
/// Throws std::invalid_argument on malformed input.
std::vector<double> parse_real_grid(const std::string& spec);

/// Comma list of integers, or "lo:hi:step".
std::vector<std::int64_t> parse_int_grid(const std::string& spec);

/// Entry point of the `beg` tool: subcommands theory, simulate, scan and
/// critical. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace beg::cli
