#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace connect_later {

// Shortest decimal form that round-trips to the same double. Platform
// independent, so CSV outputs are byte-stable.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace connect_later
