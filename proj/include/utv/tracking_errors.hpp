#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "utv/common.hpp"
#include "utv/kinematics.hpp"

namespace utv {

/// Leader pose and motion in the inertial frame.
struct LeaderState {
  double x{0.0};
  double y{0.0};
  double theta{0.0};  ///< leader course angle [rad], unwrapped
  double v{0.0};      ///< leader longitudinal speed [m/s], >= 0
};

/// Leader-follower errors expressed in the vehicle body frame.
/// e_d > 0 means the leader is to the vehicle's left (+Y_v).
struct TrackErrors {
  double e_d{0.0};  ///< cross-track [m]
  double e_s{0.0};  ///< along-track [m]
};

/// Pinhole-camera geometry used for the pixel cross-track measurement.
struct CameraParams {
  double focal_length{2.8e-3};  ///< [m]
  double pixel_pitch{19e-6};    ///< [m]
  int width_px{1280};
  int height_px{720};
};

/// Ground-truth errors from the two poses: the leader offset rotated into
/// the vehicle frame.
inline TrackErrors true_errors(const VehicleState& vehicle, const LeaderState& leader) {
  const double dx = leader.x - vehicle.x;
  const double dy = leader.y - vehicle.y;
  const double c = std::cos(vehicle.theta);
  const double s = std::sin(vehicle.theta);
  TrackErrors e;
  e.e_s = c * dx + s * dy;
  e.e_d = -s * dx + c * dy;
  return e;
}

/// Course angle error theta_L - theta_eff, where theta_eff is the
/// slip-perturbed vehicle course. No wrapping.
inline double course_angle_error(const LeaderState& leader, double theta_eff) {
  return leader.theta - theta_eff;
}

/// Cross-track error in meters from the pixel offset of the leader
/// relative to the camera center, scaled by the assumed along-track range:
///   e_d = e_s_ref * e_dc * P / f_c
inline double pixel_to_meter(double e_dc_px, double e_s_ref, const CameraParams& cam) {
  detail::require_finite(e_dc_px, "e_dc_px");
  detail::require(e_s_ref > 0.0, "e_s_ref must be > 0");
  detail::require(cam.focal_length > 0.0, "focal_length must be > 0");
  detail::require(cam.pixel_pitch > 0.0, "pixel_pitch must be > 0");
  return e_s_ref * e_dc_px * cam.pixel_pitch / cam.focal_length;
}

/// Along-track error from the laser range and the cross-track error:
/// e_s = sqrt(d^2 - e_d^2). Returns nullopt when |e_d| > d, i.e. the two
/// measurements are geometrically inconsistent.
inline std::optional<double> along_track_from_laser(double distance, double e_d) {
  detail::require(distance >= 0.0, "distance must be >= 0");
  detail::require_finite(e_d, "e_d");
  if (std::abs(e_d) > distance) return std::nullopt;
  return std::sqrt(distance * distance - e_d * e_d);
}

/// Measurement-noise description for one run.
struct NoiseModel {
  double sigma_d{0.0};  ///< cross-track std dev [m]
  double sigma_s{0.0};  ///< along-track std dev [m]
  std::uint64_t seed{0};
};

/// Deterministic Gaussian stream (Box-Muller over mt19937_64). One stream
/// per run; the same seed reproduces the same sample sequence exactly.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : rng_(seed) {}
  explicit NoiseStream(const NoiseModel& model) : model_(model), rng_(model.seed) {}

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Adds independent zero-mean Gaussian noise to both components.
  /// One Gaussian pair is consumed per call regardless of the sigmas.
  TrackErrors perturb(const TrackErrors& e, double sigma_d, double sigma_s) {
    TrackErrors out;
    out.e_d = e.e_d + sigma_d * gaussian();
    out.e_s = e.e_s + sigma_s * gaussian();
    return out;
  }

  TrackErrors perturb(const TrackErrors& e) { return perturb(e, model_.sigma_d, model_.sigma_s); }

 private:
  double uniform01() {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  NoiseModel model_{};
  std::mt19937_64 rng_;
  double spare_{0.0};
  bool have_spare_{false};
};

/// One-shot form of the noise injection; equivalent to constructing a
/// stream from the model and perturbing once.
inline TrackErrors add_noise(const TrackErrors& errors, const NoiseModel& model) {
  NoiseStream stream(model);
  return stream.perturb(errors);
}

}  // namespace utv
