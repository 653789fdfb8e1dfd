#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across stages. Case mapping is ASCII-only.
namespace mbkg {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string collapse_whitespace(std::string_view s);

std::vector<char32_t> utf8_codepoints(std::string_view s);
std::size_t utf8_length(std::string_view s);

// ASCII punctuation plus common typographic quotes and dashes.
bool is_punct_cluster(std::string_view s, std::size_t pos, std::size_t* width);

}  // namespace mbkg
