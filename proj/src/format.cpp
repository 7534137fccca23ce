#include "nomoforge/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace nomoforge {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::string format_fixed2(double value) {
  if (!std::isfinite(value)) return "0.00";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 2);
  std::string out(buf, end);
  if (out == "-0.00") out = "0.00";
  return out;
}

std::string format_cell(const Cell& cell) {
  if (const auto* label = std::get_if<std::string>(&cell)) return *label;
  return format_number(std::get<double>(cell));
}

double tidy_number(double value) {
  if (!std::isfinite(value)) return value;
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  double out = value;
  std::from_chars(buf, end, out);
  return out;
}

}  // namespace nomoforge
