#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "utv/common.hpp"

namespace utv {

/// Everything the closed loop needs from the environment at one instant.
struct ScenarioSample {
  double theta_l{0.0};     ///< leader course angle [rad]
  double v_l{0.0};         ///< leader speed [m/s]
  double slip_right{1.0};  ///< a_R
  double slip_left{1.0};   ///< a_L
  double sigma_d{0.0};     ///< cross-track measurement noise std dev [m]
  double sigma_s{0.0};     ///< along-track measurement noise std dev [m]
  double e_s_ref{0.0};     ///< along-track reference [m]
};

/// Interpretation of the benchmark leader-course table. Each table row is
/// a coefficient c on a time interval; `piecewise_constant` reads the
/// course as theta_L = c, `piecewise_ramp` as theta_L = c * t (course
/// ramping at rate c, with jumps at the interval boundaries).
/// Piecewise-constant reproduces the published comparison tables and is
/// the default; the ramp reading is kept selectable.
enum class CourseMode { piecewise_constant, piecewise_ramp };

struct CourseSegment {
  double t_begin;
  double t_end;
  double coeff;
};

/// Nine-piece leader course table for scenario 1.
inline constexpr std::array<CourseSegment, 9> kScenario1Course{{{0.0, 10.0, -0.12},
                                                                {10.0, 15.0, 0.88},
                                                                {15.0, 35.0, 1.07},
                                                                {35.0, 37.0, 1.22},
                                                                {37.0, 40.0, 0.87},
                                                                {40.0, 45.0, 1.17},
                                                                {45.0, 47.0, 0.97},
                                                                {47.0, 52.0, 0.92},
                                                                {52.0, 60.0, 0.77}}};

/// Course coefficient at time t (segments are left-closed/right-open; the
/// final segment also covers t == 60).
inline double scenario1_course_coeff(double t) {
  detail::require_finite(t, "t");
  if (t < 0.0 || t > kScenario1Course.back().t_end) {
    throw std::out_of_range("scenario 1: t outside [0, 60]");
  }
  for (const auto& seg : kScenario1Course) {
    if (t >= seg.t_begin && t < seg.t_end) return seg.coeff;
  }
  return kScenario1Course.back().coeff;
}

struct Scenario1Config {
  CourseMode course_mode{CourseMode::piecewise_constant};
  double v_nominal{2.0};
  double v_amp{1.4};         ///< speed modulation amplitude from t = 15 s
  double stop_begin{10.0};   ///< leader stops on [stop_begin, stop_end)
  double stop_end{15.0};
  double slip_from{15.0};
  double slip_base{0.7};
  double slip_amp{0.3};
  double slip_freq_right{5.0};
  double slip_freq_left{2.0};
  double noise_from{30.0};
  double sigma_d{0.02};
  double sigma_s{0.01};
  double e_s_ref_near{2.0};
  double e_s_ref_far{3.0};
  double e_s_ref_switch{45.0};
  double init_x{3.0};
  double init_y{20.0};
};

struct Scenario2Config {
  double turn_rate{0.08};  ///< leader course rate [rad/s] (circle)
  double v_l{2.0};
  double e_s_ref{2.0};
  double slip_const_right{0.8};  ///< interval ii
  double slip_const_left{0.9};
  double ramp_end{0.6};          ///< interval iii: both tracks ramp 1 -> ramp_end
  double sin_offset{0.8};        ///< interval iv: offset + amp*sin(freq*t)
  double sin_amp{0.2};
  double sin_freq{2.0};
  double sigma_d{0.02};  ///< measurement noise, active for the whole run
  double sigma_s{0.01};
  double init_x{25.0};
  double init_y{45.0};
};

/// A runnable scenario: duration, metric interval boundaries, common
/// initial position for leader and vehicle, and the per-instant sample.
struct Scenario {
  std::string name;
  double duration{0.0};
  std::vector<double> interval_bounds;
  double init_x{0.0};
  double init_y{0.0};
  double init_vehicle_course{0.0};
  std::function<ScenarioSample(double)> sample;
};

/// Scenario 1: piecewise leader course, five intervals.
///   i   [0,10)   ideal conditions, v_L = 2
///   ii  [10,15)  leader stopped
///   iii [15,30)  v_L = 2 + 1.4 sin t, sinusoidal slip on both tracks
///   iv  [30,45)  adds Gaussian measurement noise
///   v   [45,60]  along-track reference raised to 3 m
inline ScenarioSample scenario1(double t, const Scenario1Config& cfg) {
  const double c = scenario1_course_coeff(t);
  ScenarioSample s;
  s.theta_l = cfg.course_mode == CourseMode::piecewise_constant ? c : c * t;
  if (t < cfg.stop_begin) {
    s.v_l = cfg.v_nominal;
  } else if (t < cfg.stop_end) {
    s.v_l = 0.0;
  } else {
    s.v_l = cfg.v_nominal + cfg.v_amp * std::sin(t);
  }
  if (t < cfg.slip_from) {
    s.slip_right = s.slip_left = 1.0;
  } else {
    s.slip_right = cfg.slip_base + cfg.slip_amp * std::sin(cfg.slip_freq_right * t);
    s.slip_left = cfg.slip_base + cfg.slip_amp * std::sin(cfg.slip_freq_left * t);
  }
  if (t >= cfg.noise_from) {
    s.sigma_d = cfg.sigma_d;
    s.sigma_s = cfg.sigma_s;
  }
  s.e_s_ref = t < cfg.e_s_ref_switch ? cfg.e_s_ref_near : cfg.e_s_ref_far;
  return s;
}

inline ScenarioSample scenario1(double t) { return scenario1(t, Scenario1Config{}); }

/// Scenario 2: circular leader path at constant speed, four slip regimes:
///   i   [0,15)   no slip
///   ii  [15,30)  constant slip
///   iii [30,45)  ramp slip (both tracks, 1 -> ramp_end)
///   iv  [45,60]  sinusoidal slip
/// Measurement noise is active throughout.
inline ScenarioSample scenario2(double t, const Scenario2Config& cfg) {
  detail::require_finite(t, "t");
  if (t < 0.0 || t > 60.0) throw std::out_of_range("scenario 2: t outside [0, 60]");
  ScenarioSample s;
  s.theta_l = cfg.turn_rate * t;
  s.v_l = cfg.v_l;
  s.e_s_ref = cfg.e_s_ref;
  if (t < 15.0) {
    s.slip_right = s.slip_left = 1.0;
  } else if (t < 30.0) {
    s.slip_right = cfg.slip_const_right;
    s.slip_left = cfg.slip_const_left;
  } else if (t < 45.0) {
    const double f = (t - 30.0) / 15.0;
    const double a = 1.0 + (cfg.ramp_end - 1.0) * f;
    s.slip_right = s.slip_left = a;
  } else {
    const double a = cfg.sin_offset + cfg.sin_amp * std::sin(cfg.sin_freq * t);
    s.slip_right = s.slip_left = a;
  }
  s.sigma_d = cfg.sigma_d;
  s.sigma_s = cfg.sigma_s;
  return s;
}

inline ScenarioSample scenario2(double t) { return scenario2(t, Scenario2Config{}); }

inline Scenario make_scenario1(const Scenario1Config& cfg = {}) {
  Scenario s;
  s.name = "scenario1";
  s.duration = 60.0;
  s.interval_bounds = {0.0, 10.0, 15.0, 30.0, 45.0, 60.0};
  s.init_x = cfg.init_x;
  s.init_y = cfg.init_y;
  s.init_vehicle_course = 0.0;
  s.sample = [cfg](double t) { return scenario1(t, cfg); };
  return s;
}

inline Scenario make_scenario2(const Scenario2Config& cfg = {}) {
  Scenario s;
  s.name = "scenario2";
  s.duration = 60.0;
  s.interval_bounds = {0.0, 15.0, 30.0, 45.0, 60.0};
  s.init_x = cfg.init_x;
  s.init_y = cfg.init_y;
  s.init_vehicle_course = 0.0;
  s.sample = [cfg](double t) { return scenario2(t, cfg); };
  return s;
}

}  // namespace utv
