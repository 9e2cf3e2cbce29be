#pragma once

#include <cmath>

#include "utv/common.hpp"
#include "utv/rk4.hpp"

namespace utv {

/// Physical parameters of the differential-track vehicle.
struct VehicleParams {
  double wheel_radius{0.3};      ///< drive wheel radius r [m]
  double track_separation{0.7};  ///< distance between tracks B [m]
  double thetadot_max{5.0};      ///< course-rate saturation [rad/s]
};

inline void validate(const VehicleParams& p) {
  detail::require_finite(p.wheel_radius, "wheel_radius");
  detail::require_finite(p.track_separation, "track_separation");
  detail::require_finite(p.thetadot_max, "thetadot_max");
  detail::require(p.wheel_radius > 0.0, "wheel_radius must be > 0");
  detail::require(p.track_separation > 0.0, "track_separation must be > 0");
  detail::require(p.thetadot_max > 0.0, "thetadot_max must be > 0");
}

/// Inertial pose. The course angle is NOT wrapped; it accumulates so that
/// course errors stay well defined across full turns.
struct VehicleState {
  double x{0.0};
  double y{0.0};
  double theta{0.0};
};

/// Track-ground friction factors in [0, 1]; 1 means no slip.
struct SlipCoefficients {
  double right{1.0};
  double left{1.0};
};

struct WheelSpeeds {
  double right{0.0};  ///< [rad/s]
  double left{0.0};   ///< [rad/s]
};

/// Body rates (longitudinal speed, course rate).
struct Twist {
  double v{0.0};         ///< [m/s]
  double thetadot{0.0};  ///< [rad/s]
};

/// Effective body rates produced by the given wheel speeds under slip:
///   v_eff    = (r/2)  * (a_R*w_R + a_L*w_L)
///   thd_eff  = (r/B)  * (a_R*w_R - a_L*w_L)
/// Unit slip reduces to the disturbance-free model.
inline Twist forward_kinematics(const WheelSpeeds& wheels, const SlipCoefficients& slip,
                                const VehicleParams& params) {
  validate(params);
  detail::require_finite(wheels.right, "wheels.right");
  detail::require_finite(wheels.left, "wheels.left");
  detail::require_finite(slip.right, "slip.right");
  detail::require_finite(slip.left, "slip.left");
  const double r = params.wheel_radius;
  const double b = params.track_separation;
  Twist t;
  t.v = 0.5 * r * (slip.right * wheels.right + slip.left * wheels.left);
  t.thetadot = (r / b) * (slip.right * wheels.right - slip.left * wheels.left);
  return t;
}

/// Wheel speeds realizing the commanded body rates under the
/// disturbance-free model. The caller saturates thetadot beforehand.
inline WheelSpeeds inverse_kinematics(const Twist& cmd, const VehicleParams& params) {
  validate(params);
  detail::require_finite(cmd.v, "cmd.v");
  detail::require_finite(cmd.thetadot, "cmd.thetadot");
  const double r = params.wheel_radius;
  const double b = params.track_separation;
  WheelSpeeds w;
  w.right = cmd.v / r + b * cmd.thetadot / (2.0 * r);
  w.left = cmd.v / r - b * cmd.thetadot / (2.0 * r);
  return w;
}

/// Advance the pose under unicycle kinematics with constant body rates.
/// Fixed-step RK4 with substeps no longer than `max_substep` (1 ms default).
inline VehicleState integrate_pose(const VehicleState& state, const Twist& rates, double dt,
                                   double max_substep = 1e-3) {
  detail::require(dt > 0.0, "dt must be > 0");
  detail::require(max_substep > 0.0, "max_substep must be > 0");
  auto f = [&rates](double /*t*/, const std::array<double, 3>& y) {
    return std::array<double, 3>{rates.v * std::cos(y[2]), rates.v * std::sin(y[2]),
                                 rates.thetadot};
  };
  const auto out = rk4_integrate(f, 0.0, std::array<double, 3>{state.x, state.y, state.theta},
                                 dt, max_substep);
  return VehicleState{out[0], out[1], out[2]};
}

}  // namespace utv
