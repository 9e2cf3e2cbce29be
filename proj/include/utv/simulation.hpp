#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "utv/adrc.hpp"
#include "utv/adrc_discrete.hpp"
#include "utv/common.hpp"
#include "utv/kinematics.hpp"
#include "utv/metrics.hpp"
#include "utv/pid.hpp"
#include "utv/rk4.hpp"
#include "utv/scenarios.hpp"
#include "utv/tracking_errors.hpp"

namespace utv {

enum class ControllerKind { adrc_continuous, adrc_discrete, pid };

/// Plant used by the closed loop.
///
/// `kinematic`: full planar vehicle - wheel speeds drive the slip
/// kinematics, the pose is integrated, and the tracking errors are
/// computed geometrically from the two poses (default).
///
/// `error_model`: the design error dynamics are integrated directly
/// (e_d' = v_L sin(theta_e), e_s' = v_L cos(theta_e) - v_eff,
/// course' = thetadot_eff). This is the model the channel controllers are
/// designed against; it omits the geometric -thetadot*e_s coupling.
enum class PlantModel { kinematic, error_model };

inline const char* to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::adrc_continuous: return "adrc-continuous";
    case ControllerKind::adrc_discrete: return "adrc-discrete";
    default: return "pid";
  }
}

inline const char* to_string(PlantModel p) {
  return p == PlantModel::kinematic ? "kinematic" : "error-model";
}

struct AdrcSettings {
  double omega_cl_lat{1.2};
  double omega_eso_lat{10.0};
  double b0_lat{-2.0};
  double omega_cl_lon{1.0};
  double omega_eso_lon{10.0};
  double b0_lon{-1.0};
  CoeffVariant coeffs{CoeffVariant::rederived};
};

struct PidSettings {
  PidGains lateral{4.0, 2.0, 0.5, 50.0, false};
  PidGains longitudinal{3.0, 3.0, 0.0, 1.0, true};
};

struct RunConfig {
  int scenario{1};
  ControllerKind controller{ControllerKind::adrc_discrete};
  PlantModel plant{PlantModel::kinematic};
  double ts{0.01};        ///< controller sample time [s]
  double dt_plant{1e-3};  ///< plant integration substep [s]
  double duration{-1.0};  ///< <= 0 means the scenario's full duration
  std::uint64_t seed{0};
  std::string out_path;   ///< CSV destination; empty writes nothing
  VehicleParams vehicle{};
  AdrcSettings adrc{};
  PidSettings pid{};
  Scenario1Config scen1{};
  Scenario2Config scen2{};
};

/// Column-oriented tick log. `e_s_ref` is kept for metrics but is not a
/// CSV column.
struct RunLog {
  std::vector<double> t, x_l, y_l, theta_l, x_v, y_v, theta_v, e_d, e_s, e_d_meas, e_s_meas,
      v_cmd, thetadot_cmd, omega_r, omega_l, fhat_l, fhat_v, a_r, a_l, e_s_ref;
};

struct RunResult {
  RunLog log;
  std::vector<IntervalMetrics> intervals;
  std::vector<double> interval_bounds;
  std::string controller_name;
  std::string scenario_name;
  bool diverged{false};
  double diverged_at{0.0};
};

/// CSV with the fixed column set covering every logged quantity.
inline void write_csv(const RunLog& log, std::ostream& out) {
  out << "t,x_L,y_L,theta_L,x_V,y_V,theta_V,e_d_true,e_s_true,e_d_meas,e_s_meas,"
         "v_cmd,thetadot_cmd,omega_R,omega_L,fhat_l,fhat_v,a_R,a_L\n";
  char buf[640];
  for (std::size_t i = 0; i < log.t.size(); ++i) {
    std::snprintf(buf, sizeof(buf),
                  "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,"
                  "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                  log.t[i], log.x_l[i], log.y_l[i], log.theta_l[i], log.x_v[i], log.y_v[i],
                  log.theta_v[i], log.e_d[i], log.e_s[i], log.e_d_meas[i], log.e_s_meas[i],
                  log.v_cmd[i], log.thetadot_cmd[i], log.omega_r[i], log.omega_l[i],
                  log.fhat_l[i], log.fhat_v[i], log.a_r[i], log.a_l[i]);
    out << buf;
  }
}

namespace detail {

inline Scenario build_scenario(const RunConfig& cfg) {
  if (cfg.scenario == 1) return make_scenario1(cfg.scen1);
  if (cfg.scenario == 2) return make_scenario2(cfg.scen2);
  throw std::invalid_argument("scenario must be 1 or 2");
}

struct ControllerBank {
  // continuous ADRC
  LateralGains lat_gains{};
  LongitudinalGains lon_gains{};
  LateralEso lat_eso{};
  LongitudinalEso lon_eso{};
  bool eso_primed{false};
  // discrete ADRC
  std::optional<LateralDiscreteController> dlat;
  std::optional<LongitudinalDiscreteController> dlon;
  // PID pair
  std::optional<PidController> plat;
  std::optional<PidController> plon;
};

}  // namespace detail

/// Runs the full closed loop: scenario -> true errors -> noise ->
/// controller -> inverse kinematics -> slip plant, with controller ticks
/// every ts and RK4 plant substeps of at most dt_plant. One log row per
/// tick, including a terminal row at the final time. Non-finite state
/// aborts the run and flags divergence.
inline RunResult run_simulation(const RunConfig& cfg) {
  detail::require(cfg.ts > 0.0, "ts must be > 0");
  detail::require(cfg.dt_plant > 0.0, "dt_plant must be > 0");
  validate(cfg.vehicle);
  const Scenario scen = detail::build_scenario(cfg);
  const double duration =
      cfg.duration > 0.0 ? std::min(cfg.duration, scen.duration) : scen.duration;
  const auto n_ticks = static_cast<std::int64_t>(std::llround(duration / cfg.ts));
  detail::require(n_ticks >= 1, "duration must cover at least one tick");
  const auto n_sub = std::max<std::int64_t>(1, std::llround(cfg.ts / cfg.dt_plant));
  const double h = cfg.ts / static_cast<double>(n_sub);

  // sampling helper tolerant to rounding at the very end of the run
  auto sample_at = [&](double t) {
    if (t > scen.duration && t < scen.duration + 1e-6) t = scen.duration;
    if (t < 0.0 && t > -1e-6) t = 0.0;
    return scen.sample(t);
  };

  RunResult result;
  result.controller_name = to_string(cfg.controller);
  result.scenario_name = scen.name;
  result.interval_bounds = scen.interval_bounds;

  detail::ControllerBank bank;
  switch (cfg.controller) {
    case ControllerKind::adrc_continuous:
      bank.lat_gains = tune_lateral(cfg.adrc.omega_cl_lat, cfg.adrc.omega_eso_lat, cfg.adrc.b0_lat);
      bank.lon_gains = tune_longitudinal(cfg.adrc.omega_cl_lon, cfg.adrc.omega_eso_lon);
      break;
    case ControllerKind::adrc_discrete:
      bank.dlat.emplace(
          lateral_coeffs(cfg.adrc.omega_cl_lat, cfg.adrc.omega_eso_lat, cfg.adrc.b0_lat, cfg.ts),
          cfg.vehicle.thetadot_max);
      bank.dlon.emplace(longitudinal_coeffs(cfg.adrc.omega_cl_lon, cfg.adrc.omega_eso_lon,
                                            cfg.adrc.b0_lon, cfg.ts, cfg.adrc.coeffs));
      break;
    case ControllerKind::pid:
      bank.plat.emplace(cfg.pid.lateral, cfg.ts, cfg.vehicle.thetadot_max);
      bank.plon.emplace(cfg.pid.longitudinal, cfg.ts);
      break;
  }

  NoiseStream noise(cfg.seed);

  // plant state
  VehicleState vehicle{scen.init_x, scen.init_y, scen.init_vehicle_course};
  double leader_x = scen.init_x;
  double leader_y = scen.init_y;
  // error-model plant state
  double em_ed = 0.0;
  double em_es = 0.0;
  double em_course = scen.init_vehicle_course;

  auto log_reserve = [&](std::vector<double>& v) { v.reserve(static_cast<std::size_t>(n_ticks) + 1); };
  for (auto* col : {&result.log.t, &result.log.x_l, &result.log.y_l, &result.log.theta_l,
                    &result.log.x_v, &result.log.y_v, &result.log.theta_v, &result.log.e_d,
                    &result.log.e_s, &result.log.e_d_meas, &result.log.e_s_meas,
                    &result.log.v_cmd, &result.log.thetadot_cmd, &result.log.omega_r,
                    &result.log.omega_l, &result.log.fhat_l, &result.log.fhat_v, &result.log.a_r,
                    &result.log.a_l, &result.log.e_s_ref}) {
    log_reserve(*col);
  }

  for (std::int64_t k = 0; k <= n_ticks; ++k) {
    const double t = static_cast<double>(k) * cfg.ts;
    const ScenarioSample env = sample_at(t);

    TrackErrors truth;
    VehicleState logged_vehicle;
    if (cfg.plant == PlantModel::kinematic) {
      truth = true_errors(vehicle, LeaderState{leader_x, leader_y, env.theta_l, env.v_l});
      logged_vehicle = vehicle;
    } else {
      truth = TrackErrors{em_ed, em_es};
      // reconstruct the pose implied by the error states for logging
      const double c = std::cos(em_course);
      const double s = std::sin(em_course);
      logged_vehicle = VehicleState{leader_x - (c * em_es - s * em_ed),
                                    leader_y - (s * em_es + c * em_ed), em_course};
    }
    const TrackErrors meas = noise.perturb(truth, env.sigma_d, env.sigma_s);

    double thetadot_raw = 0.0;
    double v_cmd = 0.0;
    double fhat_l = 0.0;
    double fhat_v = 0.0;
    switch (cfg.controller) {
      case ControllerKind::adrc_continuous: {
        if (!bank.eso_primed) {
          bank.lat_eso = init_lateral_eso(meas.e_d);
          bank.lon_eso = init_longitudinal_eso(meas.e_s);
          bank.eso_primed = true;
        }
        thetadot_raw = lateral_control(bank.lat_eso, bank.lat_gains);
        v_cmd = longitudinal_control(bank.lon_eso, env.e_s_ref, 0.0, bank.lon_gains);
        fhat_l = bank.lat_eso.f;
        fhat_v = bank.lon_eso.f;
        break;
      }
      case ControllerKind::adrc_discrete:
        thetadot_raw = bank.dlat->step(meas.e_d);
        v_cmd = bank.dlon->step(meas.e_s, env.e_s_ref);
        break;
      case ControllerKind::pid:
        thetadot_raw = bank.plat->step(meas.e_d);
        v_cmd = bank.plon->step(meas.e_s - env.e_s_ref);
        break;
    }
    const double thetadot_cmd = saturate(thetadot_raw, cfg.vehicle.thetadot_max);
    const WheelSpeeds wheels = inverse_kinematics(Twist{v_cmd, thetadot_cmd}, cfg.vehicle);

    result.log.t.push_back(t);
    result.log.x_l.push_back(leader_x);
    result.log.y_l.push_back(leader_y);
    result.log.theta_l.push_back(env.theta_l);
    result.log.x_v.push_back(logged_vehicle.x);
    result.log.y_v.push_back(logged_vehicle.y);
    result.log.theta_v.push_back(logged_vehicle.theta);
    result.log.e_d.push_back(truth.e_d);
    result.log.e_s.push_back(truth.e_s);
    result.log.e_d_meas.push_back(meas.e_d);
    result.log.e_s_meas.push_back(meas.e_s);
    result.log.v_cmd.push_back(v_cmd);
    result.log.thetadot_cmd.push_back(thetadot_cmd);
    result.log.omega_r.push_back(wheels.right);
    result.log.omega_l.push_back(wheels.left);
    result.log.fhat_l.push_back(fhat_l);
    result.log.fhat_v.push_back(fhat_v);
    result.log.a_r.push_back(env.slip_right);
    result.log.a_l.push_back(env.slip_left);
    result.log.e_s_ref.push_back(env.e_s_ref);

    bool finite = true;
    for (double x : {truth.e_d, truth.e_s, v_cmd, thetadot_cmd, logged_vehicle.x,
                     logged_vehicle.y, logged_vehicle.theta, leader_x, leader_y}) {
      finite = finite && std::isfinite(x);
    }
    if (!finite) {
      result.diverged = true;
      result.diverged_at = t;
      break;
    }
    if (k == n_ticks) break;

    if (cfg.plant == PlantModel::kinematic) {
      auto f = [&](double tt, const std::array<double, 5>& y) {
        const ScenarioSample s = sample_at(tt);
        const Twist eff = forward_kinematics(wheels, SlipCoefficients{s.slip_right, s.slip_left},
                                             cfg.vehicle);
        return std::array<double, 5>{eff.v * std::cos(y[2]), eff.v * std::sin(y[2]), eff.thetadot,
                                     s.v_l * std::cos(s.theta_l), s.v_l * std::sin(s.theta_l)};
      };
      auto y = std::array<double, 5>{vehicle.x, vehicle.y, vehicle.theta, leader_x, leader_y};
      for (std::int64_t i = 0; i < n_sub; ++i) {
        y = rk4_step(f, t + static_cast<double>(i) * h, y, h);
      }
      vehicle = VehicleState{y[0], y[1], y[2]};
      leader_x = y[3];
      leader_y = y[4];
    } else {
      auto f = [&](double tt, const std::array<double, 5>& y) {
        const ScenarioSample s = sample_at(tt);
        const Twist eff = forward_kinematics(wheels, SlipCoefficients{s.slip_right, s.slip_left},
                                             cfg.vehicle);
        const double theta_e = s.theta_l - y[2];
        return std::array<double, 5>{s.v_l * std::sin(theta_e),
                                     s.v_l * std::cos(theta_e) - eff.v, eff.thetadot,
                                     s.v_l * std::cos(s.theta_l), s.v_l * std::sin(s.theta_l)};
      };
      auto y = std::array<double, 5>{em_ed, em_es, em_course, leader_x, leader_y};
      for (std::int64_t i = 0; i < n_sub; ++i) {
        y = rk4_step(f, t + static_cast<double>(i) * h, y, h);
      }
      em_ed = y[0];
      em_es = y[1];
      em_course = y[2];
      leader_x = y[3];
      leader_y = y[4];
    }

    if (cfg.controller == ControllerKind::adrc_continuous) {
      // held measurement and held (saturated) command over the tick
      bank.lat_eso = lateral_eso_step(bank.lat_eso, meas.e_d, thetadot_cmd, bank.lat_gains,
                                      cfg.ts, h);
      bank.lon_eso = longitudinal_eso_step(bank.lon_eso, meas.e_s, v_cmd, bank.lon_gains,
                                           cfg.ts, h);
    }
  }

  std::vector<double> es_err(result.log.t.size());
  for (std::size_t i = 0; i < es_err.size(); ++i) {
    es_err[i] = result.log.e_s_ref[i] - result.log.e_s[i];
  }
  if (!result.diverged) {
    result.intervals =
        interval_metrics(result.log.t, result.log.e_d, es_err, result.interval_bounds);
  }
  return result;
}

/// Runs two configurations that must share scenario, sample time,
/// duration and seed, and returns the joint per-interval table.
inline ComparisonTable compare_runs(const RunConfig& a, const RunConfig& b) {
  if (a.scenario != b.scenario) throw std::invalid_argument("compare: scenarios differ");
  if (a.ts != b.ts) throw std::invalid_argument("compare: sample times differ");
  if (a.duration != b.duration) throw std::invalid_argument("compare: durations differ");
  if (a.seed != b.seed) throw std::invalid_argument("compare: seeds differ");
  if (a.plant != b.plant) throw std::invalid_argument("compare: plant models differ");
  RunResult ra = run_simulation(a);
  RunResult rb = run_simulation(b);
  if (ra.diverged || rb.diverged) {
    throw std::runtime_error("compare: simulation diverged");
  }
  std::string label_a = ra.controller_name;
  std::string label_b = rb.controller_name;
  if (label_a == label_b) {
    label_a += "-a";
    label_b += "-b";
  }
  return ComparisonTable(label_a, ra.intervals, label_b, rb.intervals);
}

}  // namespace utv
