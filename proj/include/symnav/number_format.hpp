#pragma once

#include <string>

namespace symnav {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double value);

/// Parses a full token as a double; throws std::invalid_argument otherwise.
double parse_number(const std::string& text);

}  // namespace symnav
