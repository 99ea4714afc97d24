#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace auav::text {

// Number of Unicode code points in a UTF-8 string. Malformed bytes count as one each.
std::size_t utf8_length(std::string_view s);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Case-folded, whitespace-separated tokens.
std::vector<std::string> tokenize(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view haystack, std::string_view needle);

// Truncates to at most max_code_points code points without splitting a sequence.
std::string truncate_utf8(std::string_view s, std::size_t max_code_points);

// Stable 64-bit content fingerprint as 16 hex digits (not cryptographic).
std::string fingerprint(std::string_view data);

}  // namespace auav::text
