#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "chronos/error.hpp"

namespace chronos {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw IoError("cannot format number");
  return std::string(buf, end);
}

inline double parse_double(std::string_view s, std::string_view what = "number") {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ValidationError("malformed " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

inline long parse_int(std::string_view s, std::string_view what = "integer") {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ValidationError("malformed " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace chronos
