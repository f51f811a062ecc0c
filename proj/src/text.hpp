#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace alife::text {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);
int parse_int(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string trim(std::string_view s);

std::uint64_t fnv1a(std::string_view data);

}  // namespace alife::text
