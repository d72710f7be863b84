#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pgdheat::csv {

/// Interchange precision for numeric CSV output (significant digits).
/// Model files are bit-exact instead; CSV is for plots and cross-command
/// exchange, where 9 digits keep files small and diffs readable.
inline constexpr int kDigits = 9;

std::string format(double v, int digits = kDigits);

/// Splits one CSV line on commas; no quoting support (none of our formats need it).
std::vector<std::string> split(const std::string& line);

/// Strict double parse. Throws ParseError mentioning path:line on failure.
double parse_double(const std::string& token, const std::filesystem::path& path, long line);

} // namespace pgdheat::csv
