#include "fluxtrace/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace fluxtrace {

std::string format_real(double value) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), p);
}

std::string format_time(double value) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                               std::chars_format::general, 12);
  std::string text(buf.data(), p);
  double back = 0.0;
  if (!parse_real(text, back) || back != value) return format_real(value);
  return text;
}

std::string format_fixed(double value, int digits) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                               std::chars_format::fixed, digits);
  return std::string(buf.data(), p);
}

bool parse_real(std::string_view text, double& out) noexcept {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && p == last && std::isfinite(out);
}

}  // namespace fluxtrace
