#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace contres::csv {

// Shortest-but-exact float formatting: 17 significant digits, '.' decimal
// separator, locale-independent.
std::string format_double(double v);

// Splits on '\n', dropping a trailing empty line and '\r' suffixes.
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split_fields(std::string_view line);

std::int64_t parse_int(std::string_view field);     // throws on malformed input
std::uint64_t parse_uint(std::string_view field);
double parse_double(std::string_view field);

}  // namespace contres::csv
