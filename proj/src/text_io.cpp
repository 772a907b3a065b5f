#include "corerl/text_io.hpp"

#include <fstream>
#include <system_error>

#include "corerl/common.hpp"

namespace corerl {

namespace {

template <typename T>
std::string fmt_real_impl(T v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail("fmt_real: conversion failed");
  return std::string(buf, ptr);
}

template <typename T>
T parse_real_impl(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail("parse_real: not a number: '", std::string(s), "'");
  }
  return v;
}

}  // namespace

std::string fmt_real(float v) { return fmt_real_impl(v); }
std::string fmt_real(double v) { return fmt_real_impl(v); }

void append_real(std::string& out, float v) { out += fmt_real(v); }
void append_real(std::string& out, double v) { out += fmt_real(v); }

float parse_float(std::string_view s) { return parse_real_impl<float>(s); }
double parse_double(std::string_view s) { return parse_real_impl<double>(s); }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot open for writing: ", tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail("write failed: ", tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail("rename failed: ", tmp.string(), " -> ", path.string(), ": ", ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open: ", path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open: ", path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace corerl
