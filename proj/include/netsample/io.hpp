#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace netsample {

/// Shortest-safe rendering with 17 significant digits ("%.17g").
std::string fmt_double(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Strict numeric parsing of a whole token; throw ValidationError on failure.
double parse_double(std::string_view token);
std::int64_t parse_int(std::string_view token);

/// Comma-separated list of reals, e.g. "0.5,0.5".
std::vector<double> parse_double_list(std::string_view s);
std::vector<std::int64_t> parse_int_list(std::string_view s);

/// 64-bit FNV-1a, stable across platforms.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace netsample
