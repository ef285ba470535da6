#include "format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace hubbert::cli {

std::string format_number(double value, std::optional<int> digits) {
  std::array<char, 64> buf{};
  if (digits) {
    const int n = std::snprintf(buf.data(), buf.size(), "%.*g", *digits, value);
    return std::string(buf.data(), static_cast<std::size_t>(n));
  }
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

void round_numbers(nlohmann::json& doc, int digits) {
  if (doc.is_number_float()) {
    const double v = doc.get<double>();
    if (std::isfinite(v)) doc = *parse_number(format_number(v, digits));
    return;
  }
  if (doc.is_structured())
    for (auto& child : doc) round_numbers(child, digits);
}

}  // namespace hubbert::cli
