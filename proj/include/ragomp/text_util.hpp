#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ragomp::text {

std::string_view trim(std::string_view s);
std::string_view rtrim(std::string_view s);
bool is_blank(std::string_view s);

// Splits on '\n'. A trailing newline does not produce an empty final element.
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::size_t whitespace_token_count(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);
// Writes via a sibling temp file and rename so readers never observe a partial file.
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string utc_timestamp();

}  // namespace ragomp::text
