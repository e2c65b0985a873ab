#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace arlkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point shared by the executable and the tests. args excludes the
/// program name. CSV goes to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// "%.10g".
std::string format_number(double x);

/// Splits one CSV line on commas (no quoting; the schemas never need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace arlkit::cli
