#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace utv {

/// Symmetric saturation to [-limit, limit].
inline double saturate(double x, double limit) {
  return std::clamp(x, -limit, limit);
}

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

}  // namespace detail
}  // namespace utv
