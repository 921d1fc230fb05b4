#pragma once

// Minimal CSV helpers shared by the file readers and writers.

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "bach/errors.hpp"

namespace bach::csv {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Splits a comma-separated row. Blank rows and '#' comments yield no fields.
inline std::vector<std::string> split(std::string_view row) {
  std::vector<std::string> out;
  const auto body = trim(row);
  if (body.empty() || body.front() == '#') return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    out.emplace_back(trim(body.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double to_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(where + ": not a number: '" + s + "'");
  return v;
}

inline int to_int(const std::string& s, const std::string& where) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(where + ": not an integer: '" + s + "'");
  return v;
}

/// Shortest representation that parses back to the same double.
inline std::string format_exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Fixed report format used by every CSV writer.
inline std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace bach::csv
