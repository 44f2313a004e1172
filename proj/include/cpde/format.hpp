#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

#include "cpde/errors.hpp"

namespace cpde {

/// Shortest decimal representation that round-trips to the same double.
/// All file output goes through this so reruns are byte identical.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, long line = -1) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw parse_error("not a number: '" + std::string(s) + "'", line);
  return v;
}

inline std::int64_t parse_int(std::string_view s, long line = -1) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw parse_error("not an integer: '" + std::string(s) + "'", line);
  return v;
}

}  // namespace cpde
