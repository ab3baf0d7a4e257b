#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

namespace vmvt {

// floor(N^x), robust against pow() landing one ulp below an exact integer
// (64^0.5 must give 8, not 7).
inline std::int64_t floor_pow(std::int64_t N, double x) {
  double const v = std::pow(static_cast<double>(N), x);
  double r = std::floor(v);
  if ((r + 1.0) - v <= 1e-12 * (r + 1.0)) r += 1.0;
  return static_cast<std::int64_t>(r);
}

// Shortest form that round-trips at 17 significant digits.
inline std::string format_double(double v) {
  char buf[64];
  auto const res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace vmvt
