#include "symnav/number_format.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace symnav {

std::string format_number(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, end);
}

double parse_number(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    return value;
}

}  // namespace symnav
