#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "utv/simulation.hpp"

namespace utv {

/// Flat `key = value` run configuration. `#` starts a comment; blank
/// lines are ignored. Unknown keys are an error.
inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string{};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key or value");
    }
    entries[key] = value;
  }
  return entries;
}

namespace detail {

inline double config_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not a number: " + value);
  }
  if (used != value.size()) {
    throw std::invalid_argument("config key '" + key + "': not a number: " + value);
  }
  return out;
}

inline ControllerKind parse_controller(const std::string& value) {
  if (value == "adrc-continuous") return ControllerKind::adrc_continuous;
  if (value == "adrc-discrete") return ControllerKind::adrc_discrete;
  if (value == "pid") return ControllerKind::pid;
  throw std::invalid_argument("controller must be adrc-continuous, adrc-discrete, or pid");
}

inline PlantModel parse_plant(const std::string& value) {
  if (value == "kinematic") return PlantModel::kinematic;
  if (value == "error-model") return PlantModel::error_model;
  throw std::invalid_argument("plant must be kinematic or error-model");
}

inline CourseMode parse_course_mode(const std::string& value) {
  if (value == "piecewise-constant") return CourseMode::piecewise_constant;
  if (value == "piecewise-ramp") return CourseMode::piecewise_ramp;
  throw std::invalid_argument("leader_course must be piecewise-constant or piecewise-ramp");
}

inline CoeffVariant parse_coeff_variant(const std::string& value) {
  if (value == "rederived") return CoeffVariant::rederived;
  if (value == "tabulated") return CoeffVariant::tabulated;
  throw std::invalid_argument("coeffs must be rederived or tabulated");
}

}  // namespace detail

/// Applies parsed entries onto a RunConfig. Every numeric parameter of the
/// simulation is reachable here.
inline void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& entries) {
  using detail::config_number;
  for (const auto& [key, value] : entries) {
    auto num = [&]() { return config_number(key, value); };
    if (key == "scenario") cfg.scenario = static_cast<int>(num());
    else if (key == "controller") cfg.controller = detail::parse_controller(value);
    else if (key == "plant") cfg.plant = detail::parse_plant(value);
    else if (key == "leader_course") cfg.scen1.course_mode = detail::parse_course_mode(value);
    else if (key == "coeffs") cfg.adrc.coeffs = detail::parse_coeff_variant(value);
    else if (key == "ts") cfg.ts = num();
    else if (key == "dt_plant") cfg.dt_plant = num();
    else if (key == "duration") cfg.duration = num();
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(num());
    else if (key == "out") cfg.out_path = value;
    else if (key == "wheel_radius") cfg.vehicle.wheel_radius = num();
    else if (key == "track_separation") cfg.vehicle.track_separation = num();
    else if (key == "thetadot_max") cfg.vehicle.thetadot_max = num();
    else if (key == "omega_cl_lat") cfg.adrc.omega_cl_lat = num();
    else if (key == "omega_eso_lat") cfg.adrc.omega_eso_lat = num();
    else if (key == "b0_lat") cfg.adrc.b0_lat = num();
    else if (key == "omega_cl_lon") cfg.adrc.omega_cl_lon = num();
    else if (key == "omega_eso_lon") cfg.adrc.omega_eso_lon = num();
    else if (key == "b0_lon") cfg.adrc.b0_lon = num();
    else if (key == "pid_kp_lat") cfg.pid.lateral.kp = num();
    else if (key == "pid_ki_lat") cfg.pid.lateral.ki = num();
    else if (key == "pid_kd_lat") cfg.pid.lateral.kd = num();
    else if (key == "pid_filter_lat") cfg.pid.lateral.filter_coeff = num();
    else if (key == "pid_kp_lon") cfg.pid.longitudinal.kp = num();
    else if (key == "pid_ki_lon") cfg.pid.longitudinal.ki = num();
    else if (key == "s1_v_nominal") cfg.scen1.v_nominal = num();
    else if (key == "s1_v_amp") cfg.scen1.v_amp = num();
    else if (key == "s1_stop_begin") cfg.scen1.stop_begin = num();
    else if (key == "s1_stop_end") cfg.scen1.stop_end = num();
    else if (key == "s1_slip_from") cfg.scen1.slip_from = num();
    else if (key == "s1_slip_base") cfg.scen1.slip_base = num();
    else if (key == "s1_slip_amp") cfg.scen1.slip_amp = num();
    else if (key == "s1_slip_freq_right") cfg.scen1.slip_freq_right = num();
    else if (key == "s1_slip_freq_left") cfg.scen1.slip_freq_left = num();
    else if (key == "s1_noise_from") cfg.scen1.noise_from = num();
    else if (key == "s1_sigma_d") cfg.scen1.sigma_d = num();
    else if (key == "s1_sigma_s") cfg.scen1.sigma_s = num();
    else if (key == "s1_esr_near") cfg.scen1.e_s_ref_near = num();
    else if (key == "s1_esr_far") cfg.scen1.e_s_ref_far = num();
    else if (key == "s1_esr_switch") cfg.scen1.e_s_ref_switch = num();
    else if (key == "s1_init_x") cfg.scen1.init_x = num();
    else if (key == "s1_init_y") cfg.scen1.init_y = num();
    else if (key == "s2_turn_rate") cfg.scen2.turn_rate = num();
    else if (key == "s2_v_l") cfg.scen2.v_l = num();
    else if (key == "s2_esr") cfg.scen2.e_s_ref = num();
    else if (key == "s2_slip_const_right") cfg.scen2.slip_const_right = num();
    else if (key == "s2_slip_const_left") cfg.scen2.slip_const_left = num();
    else if (key == "s2_ramp_end") cfg.scen2.ramp_end = num();
    else if (key == "s2_sin_offset") cfg.scen2.sin_offset = num();
    else if (key == "s2_sin_amp") cfg.scen2.sin_amp = num();
    else if (key == "s2_sin_freq") cfg.scen2.sin_freq = num();
    else if (key == "s2_sigma_d") cfg.scen2.sigma_d = num();
    else if (key == "s2_sigma_s") cfg.scen2.sigma_s = num();
    else if (key == "s2_init_x") cfg.scen2.init_x = num();
    else if (key == "s2_init_y") cfg.scen2.init_y = num();
    else throw std::invalid_argument("unknown config key: " + key);
  }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  apply_config(cfg, parse_config_text(in));
}

}  // namespace utv
