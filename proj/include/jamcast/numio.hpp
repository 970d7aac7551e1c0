#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace jamcast {

// Shortest decimal text that round-trips the double exactly (to_chars).
// Locale-independent; used by every text format we emit.
std::string format_double(double value);

// Fixed-point text with the given number of decimals (SVG coordinates).
std::string format_fixed(double value, int decimals);

// Full-string numeric parses; throw ParseError on trailing junk or overflow.
double parse_double(std::string_view text);
std::int64_t parse_int64(std::string_view text);

}  // namespace jamcast
