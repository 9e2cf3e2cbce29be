// utvsim: leader-follower tracked-vehicle control simulator.
//
// Subcommands:
//   simulate     closed-loop run of a built-in scenario, CSV log + metrics
//   compare      two controllers on one scenario, joint per-interval table
//   replay-pose  leader pose classification + wheel-command log from a
//                landmark replay file
//   tune-report  continuous gains and discrete coefficients for given
//                bandwidths
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "utv/config.hpp"
#include "utv/pose_command.hpp"
#include "utv/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

std::string resolve_out_path(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("UTVSIM_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    return (std::filesystem::path(dir) / p).string();
  }
  return path;
}

void write_csv_file(const utv::RunLog& log, const std::string& path) {
  const std::string resolved = resolve_out_path(path);
  std::ofstream out(resolved, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + resolved);
  utv::write_csv(log, out);
  if (!out) throw std::runtime_error("write failed: " + resolved);
}

struct CommonOpts {
  std::string config_file;
  utv::RunConfig cfg;
};

void add_run_options(CLI::App* cmd, CommonOpts& o, bool with_controller) {
  cmd->add_option("--config", o.config_file, "key = value config file applied before flags");
  cmd->add_option("--scenario", o.cfg.scenario, "built-in scenario id (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  if (with_controller) {
    cmd->add_option_function<std::string>(
           "--controller",
           [&o](const std::string& v) { o.cfg.controller = utv::detail::parse_controller(v); },
           "adrc-continuous | adrc-discrete | pid");
  }
  cmd->add_option_function<std::string>(
         "--plant", [&o](const std::string& v) { o.cfg.plant = utv::detail::parse_plant(v); },
         "kinematic | error-model");
  cmd->add_option_function<std::string>(
         "--leader-course",
         [&o](const std::string& v) { o.cfg.scen1.course_mode = utv::detail::parse_course_mode(v); },
         "piecewise-constant | piecewise-ramp (scenario 1)");
  cmd->add_option_function<std::string>(
         "--coeffs",
         [&o](const std::string& v) { o.cfg.adrc.coeffs = utv::detail::parse_coeff_variant(v); },
         "discrete longitudinal denominator variant: rederived | tabulated");
  cmd->add_option("--ts", o.cfg.ts, "controller sample time [s]");
  cmd->add_option("--dt-plant", o.cfg.dt_plant, "plant integration substep [s]");
  cmd->add_option("--duration", o.cfg.duration, "run length [s]; default: scenario duration");
  cmd->add_option("--seed", o.cfg.seed, "measurement-noise RNG seed");
}

// A --config file provides the base configuration; flags parsed afterwards
// override it. The file is applied to the bound struct before CLI11 runs,
// so the pre-pass extracts the path from argv directly.
std::string scan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

int run_simulate(CommonOpts& o, const std::string& out) {
  if (!out.empty()) o.cfg.out_path = out;
  utv::RunResult r = utv::run_simulation(o.cfg);
  if (r.diverged) {
    std::cerr << "numerical divergence at t = " << r.diverged_at
              << " s (non-finite state); partial log kept\n";
    if (!o.cfg.out_path.empty()) write_csv_file(r.log, o.cfg.out_path);
    return kExitNumerical;
  }
  if (!o.cfg.out_path.empty()) write_csv_file(r.log, o.cfg.out_path);
  std::cout << r.scenario_name << ", " << r.controller_name << ", plant "
            << utv::to_string(o.cfg.plant) << ", ts " << o.cfg.ts << " s, seed " << o.cfg.seed
            << "\n";
  std::cout << "interval        iae_ed      iae_ese\n";
  char buf[96];
  for (std::size_t i = 0; i < r.intervals.size(); ++i) {
    const auto& m = r.intervals[i];
    std::snprintf(buf, sizeof(buf), "%zu [%4.0f,%4.0f)  %9.4f  %9.4f\n", i + 1, m.t0, m.t1,
                  m.iae_ed, m.iae_ese);
    std::cout << buf;
  }
  return kExitOk;
}

int run_compare(CommonOpts& o, const std::string& kind_a, const std::string& kind_b,
                const std::string& out_a, const std::string& out_b, bool csv) {
  utv::RunConfig ca = o.cfg;
  utv::RunConfig cb = o.cfg;
  ca.controller = utv::detail::parse_controller(kind_a);
  cb.controller = utv::detail::parse_controller(kind_b);
  utv::RunResult ra = utv::run_simulation(ca);
  utv::RunResult rb = utv::run_simulation(cb);
  if (ra.diverged || rb.diverged) {
    std::cerr << "numerical divergence during comparison\n";
    return kExitNumerical;
  }
  if (!out_a.empty()) write_csv_file(ra.log, out_a);
  if (!out_b.empty()) write_csv_file(rb.log, out_b);
  std::string label_a = ra.controller_name;
  std::string label_b = rb.controller_name;
  if (label_a == label_b) {
    label_a += "-a";
    label_b += "-b";
  }
  utv::ComparisonTable table(label_a, ra.intervals, label_b, rb.intervals);
  std::cout << (csv ? table.to_csv() : table.to_text());
  return kExitOk;
}

int run_replay(const std::string& landmarks_path, const std::string& controller,
               double ts, double e_d, double e_s, double e_s_ref, double v_fix,
               const std::string& out) {
  const auto frames = utv::load_landmark_file(landmarks_path);
  utv::VehicleParams params;
  utv::CommandSelector selector(params, v_fix);

  const utv::ControllerKind kind = utv::detail::parse_controller(controller);
  utv::LateralGains lat_gains;
  utv::LongitudinalGains lon_gains;
  utv::LateralEso lat_eso;
  utv::LongitudinalEso lon_eso;
  std::optional<utv::LateralDiscreteController> dlat;
  std::optional<utv::LongitudinalDiscreteController> dlon;
  std::optional<utv::PidController> plat;
  std::optional<utv::PidController> plon;
  const utv::AdrcSettings adrc;
  const utv::PidSettings pid;
  switch (kind) {
    case utv::ControllerKind::adrc_continuous:
      lat_gains = utv::tune_lateral(adrc.omega_cl_lat, adrc.omega_eso_lat, adrc.b0_lat);
      lon_gains = utv::tune_longitudinal(adrc.omega_cl_lon, adrc.omega_eso_lon);
      lat_eso = utv::init_lateral_eso(e_d);
      lon_eso = utv::init_longitudinal_eso(e_s);
      break;
    case utv::ControllerKind::adrc_discrete:
      dlat.emplace(utv::lateral_coeffs(adrc.omega_cl_lat, adrc.omega_eso_lat, adrc.b0_lat, ts),
                   params.thetadot_max);
      dlon.emplace(
          utv::longitudinal_coeffs(adrc.omega_cl_lon, adrc.omega_eso_lon, adrc.b0_lon, ts));
      break;
    case utv::ControllerKind::pid:
      plat.emplace(pid.lateral, ts, params.thetadot_max);
      plon.emplace(pid.longitudinal, ts);
      break;
  }

  std::ostringstream csv;
  csv << "t,pose,active_pose,thetadot_cmd,v_cmd,omega_R,omega_L\n";
  std::cout << "t        pose                 active               omega_R   omega_L\n";
  for (const auto& frame : frames) {
    double thetadot = 0.0;
    double v = 0.0;
    switch (kind) {
      case utv::ControllerKind::adrc_continuous:
        thetadot = utv::saturate(utv::lateral_control(lat_eso, lat_gains), params.thetadot_max);
        v = utv::longitudinal_control(lon_eso, e_s_ref, 0.0, lon_gains);
        lat_eso = utv::lateral_eso_step(lat_eso, e_d, thetadot, lat_gains, ts);
        lon_eso = utv::longitudinal_eso_step(lon_eso, e_s, v, lon_gains, ts);
        break;
      case utv::ControllerKind::adrc_discrete:
        thetadot = dlat->step(e_d);
        v = dlon->step(e_s, e_s_ref);
        break;
      case utv::ControllerKind::pid:
        thetadot = plat->step(e_d);
        v = plon->step(e_s - e_s_ref);
        break;
    }
    const utv::LeaderPose pose = utv::classify_pose(frame);
    const utv::WheelCommand cmd = selector.select(pose, thetadot, v);
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%-8.3f %-20s %-20s %9.4f %9.4f\n", frame.timestamp,
                  utv::to_string(pose), utv::to_string(selector.active_pose()), cmd.right,
                  cmd.left);
    std::cout << buf;
    std::snprintf(buf, sizeof(buf), "%.10g,%s,%s,%.10g,%.10g,%.10g,%.10g\n", frame.timestamp,
                  utv::to_string(pose), utv::to_string(selector.active_pose()), thetadot, v,
                  cmd.right, cmd.left);
    csv << buf;
  }
  if (!out.empty()) {
    const std::string resolved = resolve_out_path(out);
    std::ofstream f(resolved, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + resolved);
    f << csv.str();
  }
  return kExitOk;
}

int run_tune_report(const utv::AdrcSettings& s, double ts) {
  const auto lat = utv::tune_lateral(s.omega_cl_lat, s.omega_eso_lat, s.b0_lat);
  const auto lon = utv::tune_longitudinal(s.omega_cl_lon, s.omega_eso_lon);
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "lateral continuous   (wcl %.6g, weso %.6g, b0 %.6g):\n"
                "  k1 %.12g  k2 %.12g\n  l1 %.12g  l2 %.12g  l3 %.12g\n",
                s.omega_cl_lat, s.omega_eso_lat, s.b0_lat, lat.k1, lat.k2, lat.l1, lat.l2, lat.l3);
  std::cout << buf;
  std::snprintf(buf, sizeof(buf),
                "longitudinal continuous (wcl %.6g, weso %.6g):\n  k1 %.12g  l1 %.12g  l2 %.12g\n",
                s.omega_cl_lon, s.omega_eso_lon, lon.k1, lon.l1, lon.l2);
  std::cout << buf;

  const auto lc = utv::lateral_coeffs(s.omega_cl_lat, s.omega_eso_lat, s.b0_lat, ts);
  std::snprintf(buf, sizeof(buf),
                "lateral discrete (Ts %.6g s):\n"
                "  alpha11 %.12g  alpha12 %.12g\n  beta10 %.12g  beta11 %.12g  beta12 %.12g\n",
                ts, lc.alpha11, lc.alpha12, lc.beta10, lc.beta11, lc.beta12);
  std::cout << buf;
  for (auto variant : {utv::CoeffVariant::rederived, utv::CoeffVariant::tabulated}) {
    const auto vc =
        utv::longitudinal_coeffs(s.omega_cl_lon, s.omega_eso_lon, s.b0_lon, ts, variant);
    std::snprintf(buf, sizeof(buf),
                  "longitudinal discrete, %s:\n"
                  "  alpha21 %.12g  beta20 %.12g  beta21 %.12g\n"
                  "  gamma20 %.12g  gamma21 %.12g  gamma22 %.12g\n",
                  variant == utv::CoeffVariant::rederived ? "rederived" : "tabulated", vc.alpha21,
                  vc.beta20, vc.beta21, vc.gamma20, vc.gamma21, vc.gamma22);
    std::cout << buf;
  }
  std::cout << utv::coefficient_discrepancy_report(s.omega_cl_lon, s.omega_eso_lon, s.b0_lon, ts);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leader-follower tracked-vehicle control simulator"};
  app.require_subcommand(1);

  CommonOpts sim_opts;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "run one closed-loop scenario");
  add_run_options(sim, sim_opts, true);
  sim->add_option("--out", sim_out, "CSV log path (UTVSIM_OUTPUT_DIR prefixes relative paths)");

  CommonOpts cmp_opts;
  std::string cmp_a = "adrc-discrete";
  std::string cmp_b = "pid";
  std::string cmp_out_a, cmp_out_b;
  bool cmp_csv = false;
  auto* cmp = app.add_subcommand("compare", "run two controllers on one scenario");
  add_run_options(cmp, cmp_opts, false);
  cmp->add_option("--a", cmp_a, "first controller (default adrc-discrete)");
  cmp->add_option("--b", cmp_b, "second controller (default pid)");
  cmp->add_option("--out-a", cmp_out_a, "CSV log for the first run");
  cmp->add_option("--out-b", cmp_out_b, "CSV log for the second run");
  cmp->add_flag("--csv", cmp_csv, "print the table as CSV instead of aligned text");

  std::string replay_landmarks, replay_controller = "adrc-discrete", replay_out;
  double replay_ts = 0.2, replay_ed = 0.0, replay_es = 2.0, replay_esr = 2.0, replay_vfix = 0.5;
  auto* rep = app.add_subcommand("replay-pose", "classify a landmark replay into wheel commands");
  rep->add_option("--landmarks", replay_landmarks, "replay file: t + 33 (x y visibility) per line")
      ->required();
  rep->add_option("--controller", replay_controller, "controller supplying upright-pose commands");
  rep->add_option("--ts", replay_ts, "controller sample time [s] (default 0.2)");
  rep->add_option("--e-d", replay_ed, "held cross-track measurement [m]");
  rep->add_option("--e-s", replay_es, "held along-track measurement [m]");
  rep->add_option("--e-s-ref", replay_esr, "along-track reference [m]");
  rep->add_option("--v-fix", replay_vfix, "fixed speed for hand-raised poses [m/s]");
  rep->add_option("--out", replay_out, "command log CSV path");

  utv::AdrcSettings tune_settings;
  double tune_ts = 0.2;
  auto* tune = app.add_subcommand("tune-report", "print gains and discrete coefficients");
  tune->add_option("--omega-cl-lat", tune_settings.omega_cl_lat, "lateral control bandwidth");
  tune->add_option("--omega-eso-lat", tune_settings.omega_eso_lat, "lateral observer bandwidth");
  tune->add_option("--b0-lat", tune_settings.b0_lat, "lateral input gain");
  tune->add_option("--omega-cl-lon", tune_settings.omega_cl_lon, "longitudinal control bandwidth");
  tune->add_option("--omega-eso-lon", tune_settings.omega_eso_lon,
                   "longitudinal observer bandwidth");
  tune->add_option("--b0-lon", tune_settings.b0_lon, "longitudinal input gain");
  tune->add_option("--ts", tune_ts, "sample time [s]");

  const std::string config_path = scan_config_path(argc, argv);
  if (!config_path.empty()) {
    try {
      utv::apply_config_file(sim_opts.cfg, config_path);
      utv::apply_config_file(cmp_opts.cfg, config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_opts, sim_out);
    if (cmp->parsed()) {
      return run_compare(cmp_opts, cmp_a, cmp_b, cmp_out_a, cmp_out_b, cmp_csv);
    }
    if (rep->parsed()) {
      return run_replay(replay_landmarks, replay_controller, replay_ts, replay_ed, replay_es,
                        replay_esr, replay_vfix, replay_out);
    }
    if (tune->parsed()) return run_tune_report(tune_settings, tune_ts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
