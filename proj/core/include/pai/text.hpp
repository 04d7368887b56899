#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the parsers. ASCII-only case folding.
namespace pai::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);

/// Lowercase, trim, collapse internal whitespace runs to one space.
std::string normalize(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep, bool keep_empty = false);

/// Position of the last case-sensitive occurrence of `needle`, or npos.
std::size_t rfind(std::string_view haystack, std::string_view needle);

/// Position of the first case-insensitive occurrence of `needle` at or after `from`.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0);

/// Number of Unicode code points in a UTF-8 string (invalid bytes count as one).
std::size_t utf8_length(std::string_view s);

/// Byte offset of the code point with index `cp` (clamped to size).
std::size_t utf8_offset(std::string_view s, std::size_t cp);

std::size_t word_count(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace pai::text
