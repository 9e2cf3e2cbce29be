#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace utv {

/// One classic fixed-step RK4 step for dy/dt = f(t, y).
///
/// `f` takes (double t, const std::array<double, N>&) and returns the
/// derivative as std::array<double, N>.
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_step(Deriv&& f, double t, const std::array<double, N>& y, double h) {
  const auto k1 = f(t, y);
  std::array<double, N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  const auto k2 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  const auto k3 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
  const auto k4 = f(t + h, tmp);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

/// Integrate over [t0, t0 + span] with uniform substeps no longer than
/// `max_substep`. `span <= 0` returns the state unchanged.
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_integrate(Deriv&& f, double t0, std::array<double, N> y, double span,
                                    double max_substep) {
  if (span <= 0.0) return y;
  const auto steps = static_cast<std::size_t>(std::ceil(span / max_substep - 1e-12));
  const std::size_t n = steps == 0 ? 1 : steps;
  const double h = span / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    y = rk4_step(f, t0 + static_cast<double>(i) * h, y, h);
  }
  return y;
}

}  // namespace utv
