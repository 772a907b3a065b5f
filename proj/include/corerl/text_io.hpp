#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace corerl {

// Shortest decimal form that round-trips exactly for the given type.
std::string fmt_real(float v);
std::string fmt_real(double v);

void append_real(std::string& out, float v);
void append_real(std::string& out, double v);

float parse_float(std::string_view s);
double parse_double(std::string_view s);

// Writes to <path>.tmp then renames, so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace corerl
