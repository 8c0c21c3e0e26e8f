#ifndef FLUXTRACE_FORMAT_HPP
#define FLUXTRACE_FORMAT_HPP

#include <string>
#include <string_view>

namespace fluxtrace {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

/// Trace timestamp: 12 significant digits, widened to the shortest exact
/// representation when 12 digits would not read back bit-identical.
std::string format_time(double value);

/// Fixed-point rendering with `digits` decimals, used for DOT attributes.
std::string format_fixed(double value, int digits);

/// Parses a complete decimal literal; returns false on any trailing junk.
bool parse_real(std::string_view text, double& out) noexcept;

}  // namespace fluxtrace

#endif  // FLUXTRACE_FORMAT_HPP
