#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace hubbert::cli {

/// Shortest round-trip decimal, or `digits` significant digits when given.
std::string format_number(double value, std::optional<int> digits = {});

/// Strict decimal parse of the whole field; nullopt on any trailing garbage.
std::optional<double> parse_number(std::string_view text);

/// Rounds every floating-point number in `doc` to `digits` significant digits.
void round_numbers(nlohmann::json& doc, int digits);

}  // namespace hubbert::cli
