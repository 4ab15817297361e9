#pragma once

#include <charconv>
#include <string>

namespace beacon_forge {

/// Shortest decimal form that round-trips; used for every real in CSV output.
inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace beacon_forge
