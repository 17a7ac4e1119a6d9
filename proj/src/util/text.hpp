#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace socsim {

std::string to_lower_ascii(std::string_view s);

// Case-insensitive substring test (ASCII folding).
bool contains_ci(std::string_view haystack, std::string_view needle);

// Lowercase and split on non-alphanumeric byte runs.
std::vector<std::string> tokenize(std::string_view s);

// Byte-wise truncation with a trailing ellipsis marker when cut.
std::string truncate(std::string_view s, std::size_t max_bytes);

// Shortest round-trip decimal rendering; integers come out without a point.
std::string format_double(double v);

}  // namespace socsim
