#pragma once

#include <array>

#include "utv/common.hpp"
#include "utv/rk4.hpp"

namespace utv {

/// Gains for the lateral (cross-track) ADRC channel.
///
/// Bandwidth parameterization: controller poles at -omega_cl, observer
/// poles at -omega_eso:
///   k1 = omega_cl^2,  k2 = 2*omega_cl
///   l1 = 3*omega_eso, l2 = 3*omega_eso^2, l3 = omega_eso^3
struct LateralGains {
  double k1{0.0};
  double k2{0.0};
  double l1{0.0};
  double l2{0.0};
  double l3{0.0};
  double b0{0.0};  ///< assumed input gain (negated expected leader speed) [m/s]
  double omega_cl{0.0};
  double omega_eso{0.0};
};

inline LateralGains tune_lateral(double omega_cl, double omega_eso, double b0) {
  detail::require_finite(omega_cl, "omega_cl");
  detail::require_finite(omega_eso, "omega_eso");
  detail::require_finite(b0, "b0");
  detail::require(omega_cl > 0.0, "omega_cl must be > 0");
  detail::require(omega_eso > 0.0, "omega_eso must be > 0");
  detail::require(b0 != 0.0, "b0 must be nonzero");
  LateralGains g;
  g.k1 = omega_cl * omega_cl;
  g.k2 = 2.0 * omega_cl;
  g.l1 = 3.0 * omega_eso;
  g.l2 = 3.0 * omega_eso * omega_eso;
  g.l3 = omega_eso * omega_eso * omega_eso;
  g.b0 = b0;
  g.omega_cl = omega_cl;
  g.omega_eso = omega_eso;
  return g;
}

/// Gains for the longitudinal (along-track) ADRC channel:
///   k1 = omega_cl,  l1 = 2*omega_eso,  l2 = omega_eso^2
struct LongitudinalGains {
  double k1{0.0};
  double l1{0.0};
  double l2{0.0};
  double omega_cl{0.0};
  double omega_eso{0.0};
};

inline LongitudinalGains tune_longitudinal(double omega_cl, double omega_eso) {
  detail::require_finite(omega_cl, "omega_cl");
  detail::require_finite(omega_eso, "omega_eso");
  detail::require(omega_cl > 0.0, "omega_cl must be > 0");
  detail::require(omega_eso > 0.0, "omega_eso must be > 0");
  LongitudinalGains g;
  g.k1 = omega_cl;
  g.l1 = 2.0 * omega_eso;
  g.l2 = omega_eso * omega_eso;
  g.omega_cl = omega_cl;
  g.omega_eso = omega_eso;
  return g;
}

/// Lateral extended-state observer estimates: cross-track error, its rate,
/// and the lumped disturbance f_l.
struct LateralEso {
  double e_d{0.0};
  double e_d_rate{0.0};
  double f{0.0};
};

/// Longitudinal observer estimates: along-track error and the lumped
/// disturbance f_v.
struct LongitudinalEso {
  double e_s{0.0};
  double f{0.0};
};

/// Initialize with the first measurement to avoid a startup transient.
inline LateralEso init_lateral_eso(double first_measurement) {
  return LateralEso{first_measurement, 0.0, 0.0};
}
inline LongitudinalEso init_longitudinal_eso(double first_measurement) {
  return LongitudinalEso{first_measurement, 0.0};
}

/// Advance the lateral ESO by dt under held measurement and control input.
/// Same integrator policy as the plant (RK4, <= 1 ms substeps):
///   z1' = z2 + l1 (y - z1)
///   z2' = z3 + b0 u + l2 (y - z1)
///   z3' = l3 (y - z1)
inline LateralEso lateral_eso_step(const LateralEso& state, double e_d_meas, double u,
                                   const LateralGains& g, double dt, double max_substep = 1e-3) {
  detail::require(dt > 0.0, "dt must be > 0");
  auto f = [&](double /*t*/, const std::array<double, 3>& z) {
    const double err = e_d_meas - z[0];
    return std::array<double, 3>{z[1] + g.l1 * err, z[2] + g.b0 * u + g.l2 * err, g.l3 * err};
  };
  const auto out = rk4_integrate(f, 0.0, std::array<double, 3>{state.e_d, state.e_d_rate, state.f},
                                 dt, max_substep);
  return LateralEso{out[0], out[1], out[2]};
}

/// Lateral control law: thetadot = (-k1 z1 - k2 z2 - z3) / b0.
/// The caller saturates to +-thetadot_max and feeds the saturated value
/// back into the observer.
inline double lateral_control(const LateralEso& z, const LateralGains& g) {
  return (-g.k1 * z.e_d - g.k2 * z.e_d_rate - z.f) / g.b0;
}

/// Advance the longitudinal ESO by dt (input matrix [-1, 0]^T):
///   z1' = z2 - u + l1 (y - z1)
///   z2' = l2 (y - z1)
inline LongitudinalEso longitudinal_eso_step(const LongitudinalEso& state, double e_s_meas,
                                             double u, const LongitudinalGains& g, double dt,
                                             double max_substep = 1e-3) {
  detail::require(dt > 0.0, "dt must be > 0");
  auto f = [&](double /*t*/, const std::array<double, 2>& z) {
    const double err = e_s_meas - z[0];
    return std::array<double, 2>{z[1] - u + g.l1 * err, g.l2 * err};
  };
  const auto out =
      rk4_integrate(f, 0.0, std::array<double, 2>{state.e_s, state.f}, dt, max_substep);
  return LongitudinalEso{out[0], out[1]};
}

/// Longitudinal control law: v = -k1 (e_s_ref - z1) - e_s_ref_rate + z2.
inline double longitudinal_control(const LongitudinalEso& z, double e_s_ref, double e_s_ref_rate,
                                   const LongitudinalGains& g) {
  return -g.k1 * (e_s_ref - z.e_s) - e_s_ref_rate + z.f;
}

}  // namespace utv
