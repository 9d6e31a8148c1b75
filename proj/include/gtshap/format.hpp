#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace gtshap {

/// Formats a double with %.15g — the fixed real-number format of every
/// file this library writes. Pinning one printf-style format (rather than
/// iostream state) is what makes output files byte-reproducible.
inline std::string format_real(double x) {
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "%.15g", x);
  if (n < 0 || n >= static_cast<int>(sizeof(buf))) {
    throw std::runtime_error("format_real: snprintf failed");
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

/// Round-trip-exact formatting (%.17g), used only by the cache file so
/// that persisted utilities reload to the identical double.
inline std::string format_real_exact(double x) {
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "%.17g", x);
  if (n < 0 || n >= static_cast<int>(sizeof(buf))) {
    throw std::runtime_error("format_real_exact: snprintf failed");
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace gtshap
