#pragma once

#include <optional>

#include "utv/common.hpp"

namespace utv {

/// Parallel-form PID gains. `filter_coeff` (N) shapes the first-order
/// derivative filter Kd*N*s/(s+N); `is_pi` disables the derivative term.
struct PidGains {
  double kp{0.0};
  double ki{0.0};
  double kd{0.0};
  double filter_coeff{1.0};
  bool is_pi{false};
};

/// Discretized PID: backward-Euler integrator, Tustin derivative filter,
/// optional output saturation with conditional-integration anti-windup
/// (the integrator holds whenever the output saturates and the error
/// would drive it further out).
class PidController {
 public:
  PidController(const PidGains& gains, double ts,
                std::optional<double> output_limit = std::nullopt)
      : g_(gains), ts_(ts), limit_(output_limit) {
    detail::require(ts > 0.0, "ts must be > 0");
    if (!g_.is_pi && g_.kd != 0.0) {
      detail::require(g_.filter_coeff > 0.0, "filter_coeff must be > 0 when kd is nonzero");
    }
  }

  double step(double error) {
    detail::require_finite(error, "error");
    double d = 0.0;
    if (!g_.is_pi && g_.kd != 0.0) {
      const double a = 2.0 / ts_;  // Tustin map s ~ a (1 - z^-1)/(1 + z^-1)
      d = ((a - g_.filter_coeff) * deriv_ +
           g_.kd * g_.filter_coeff * a * (error - prev_error_)) /
          (a + g_.filter_coeff);
    }
    const double integral_cand = integral_ + ts_ * error;
    const double unsat = g_.kp * error + g_.ki * integral_cand + d;
    double out = unsat;
    if (limit_) {
      out = saturate(unsat, *limit_);
      if (out == unsat || (unsat > 0.0) != (error > 0.0)) {
        integral_ = integral_cand;
      }
    } else {
      integral_ = integral_cand;
    }
    deriv_ = d;
    prev_error_ = error;
    return out;
  }

  void reset() {
    integral_ = deriv_ = prev_error_ = 0.0;
  }

  double integral_state() const { return integral_; }
  const PidGains& gains() const { return g_; }

 private:
  PidGains g_;
  double ts_;
  std::optional<double> limit_;
  double integral_{0.0};
  double deriv_{0.0};
  double prev_error_{0.0};
};

}  // namespace utv
