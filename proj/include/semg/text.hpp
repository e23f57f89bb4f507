#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace semg::text {

// Shortest text that round-trips the double exactly (%.17g).
std::string format_double(double value);

std::string format_fixed(double value, int decimals);

// Locale-independent; throws FormatError with the given context on failure.
double parse_double(std::string_view token, const std::string& context);

long parse_long(std::string_view token, const std::string& context);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace semg::text
