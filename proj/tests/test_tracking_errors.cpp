#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "utv/rk4.hpp"
#include "utv/tracking_errors.hpp"

using Catch::Approx;
using namespace utv;

TEST_CASE("true errors in the body frame") {
  SECTION("leader dead ahead") {
    const TrackErrors e = true_errors({0, 0, 0}, {2, 0, 0, 1});
    REQUIRE(e.e_d == Approx(0.0).margin(1e-12));
    REQUIRE(e.e_s == Approx(2.0).epsilon(1e-12));
  }
  SECTION("leader ahead and to the left") {
    const TrackErrors e = true_errors({0, 0, 0}, {2, 1, 0, 1});
    REQUIRE(e.e_d == Approx(1.0).epsilon(1e-12));
    REQUIRE(e.e_s == Approx(2.0).epsilon(1e-12));
  }
  SECTION("rotated frame") {
    const TrackErrors e = true_errors({0, 0, M_PI_2}, {0, 2, 0, 1});
    REQUIRE(e.e_d == Approx(0.0).margin(1e-12));
    REQUIRE(e.e_s == Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("course angle error is a plain difference, no wrapping") {
  REQUIRE(course_angle_error({0, 0, 1.0, 0}, 1.0) == 0.0);
  REQUIRE(course_angle_error({0, 0, 1.07, 0}, 0.8) == Approx(0.27).epsilon(1e-12));
  REQUIRE(course_angle_error({0, 0, 0.0, 0}, 2.0 * M_PI) == Approx(-2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("pixel to meter conversion") {
  const CameraParams cam;  // 2.8 mm focal length, 19 um pitch
  REQUIRE(pixel_to_meter(0.0, 2.0, cam) == 0.0);
  REQUIRE(pixel_to_meter(100.0, 2.0, cam) == Approx(1.3571428571).epsilon(1e-6));
  REQUIRE(pixel_to_meter(-100.0, 2.0, cam) == Approx(-1.3571428571).epsilon(1e-6));
  REQUIRE_THROWS_AS(pixel_to_meter(10.0, 0.0, cam), std::invalid_argument);
}

TEST_CASE("pixel to meter is linear in both arguments") {
  const CameraParams cam;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> px(-600.0, 600.0);
  std::uniform_real_distribution<double> range(0.5, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double p = px(rng);
    const double r = range(rng);
    REQUIRE(pixel_to_meter(2.0 * p, r, cam) == Approx(2.0 * pixel_to_meter(p, r, cam)).margin(1e-12));
    REQUIRE(pixel_to_meter(p, 2.0 * r, cam) == Approx(2.0 * pixel_to_meter(p, r, cam)).margin(1e-12));
  }
}

TEST_CASE("laser along-track computation") {
  REQUIRE(along_track_from_laser(2.0, 0.0).value() == Approx(2.0).epsilon(1e-12));
  REQUIRE(along_track_from_laser(2.5, 1.5).value() == Approx(2.0).epsilon(1e-12));
  REQUIRE_FALSE(along_track_from_laser(1.0, 1.5).has_value());
  REQUIRE_THROWS_AS(along_track_from_laser(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("camera + laser measurement round trip") {
  const CameraParams cam;
  const double e_d = 0.3, e_s = 1.7, e_s_ref = 2.0;
  const double distance = std::hypot(e_d, e_s);
  const double pixels = e_d * cam.focal_length / (e_s_ref * cam.pixel_pitch);
  const double e_d_rec = pixel_to_meter(pixels, e_s_ref, cam);
  REQUIRE(e_d_rec == Approx(e_d).margin(1e-12));
  const auto e_s_rec = along_track_from_laser(distance, e_d_rec);
  REQUIRE(e_s_rec.has_value());
  REQUIRE(*e_s_rec == Approx(e_s).margin(1e-9));
}

TEST_CASE("noise stream determinism and statistics") {
  SECTION("zero sigma leaves the errors unchanged") {
    NoiseStream s(123);
    const TrackErrors e = s.perturb({0.4, 1.9}, 0.0, 0.0);
    REQUIRE(e.e_d == 0.4);
    REQUIRE(e.e_s == 1.9);
  }
  SECTION("same seed, same stream") {
    NoiseStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
      REQUIRE(a.gaussian() == b.gaussian());
    }
  }
  SECTION("sample std dev close to sigma") {
    NoiseStream s(7);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const TrackErrors e = s.perturb({0.0, 0.0}, 0.02, 0.01);
      sum += e.e_d;
      sum2 += e.e_d * e.e_d;
    }
    const double mean = sum / n;
    const double stddev = std::sqrt(sum2 / n - mean * mean);
    REQUIRE(stddev == Approx(0.02).epsilon(0.02));
  }
  SECTION("one-shot add_noise matches a fresh stream") {
    const NoiseModel model{0.05, 0.03, 99};
    NoiseStream s(model);
    const TrackErrors via_stream = s.perturb({1.0, 2.0});
    const TrackErrors via_oneshot = add_noise({1.0, 2.0}, model);
    REQUIRE(via_stream.e_d == via_oneshot.e_d);
    REQUIRE(via_stream.e_s == via_oneshot.e_s);
  }
}

// For a stationary vehicle the error rates reduce to
//   d(e_d)/dt = v_L sin(theta_e),  d(e_s)/dt = v_L cos(theta_e).
// Integrate the leader geometrically and compare finite differences of the
// geometric errors against those expressions.
TEST_CASE("error rates match the design model for a stationary vehicle") {
  const VehicleState vehicle{0.0, 0.0, 0.3};
  const double v_l = 1.5;
  auto leader_course = [](double t) { return 0.2 + 0.1 * std::sin(t); };
  auto f = [&](double t, const std::array<double, 2>& p) {
    return std::array<double, 2>{v_l * std::cos(leader_course(t)), v_l * std::sin(leader_course(t))};
  };

  const double t_eval = 1.0, delta = 1e-3;
  auto leader_at = [&](double t) {
    return rk4_integrate(f, 0.0, std::array<double, 2>{1.0, 0.5}, t, 1e-4);
  };
  const auto pm = leader_at(t_eval - delta);
  const auto pp = leader_at(t_eval + delta);
  const TrackErrors em = true_errors(vehicle, {pm[0], pm[1], leader_course(t_eval - delta), v_l});
  const TrackErrors ep = true_errors(vehicle, {pp[0], pp[1], leader_course(t_eval + delta), v_l});

  const double theta_e = leader_course(t_eval) - vehicle.theta;
  const double ed_rate_num = (ep.e_d - em.e_d) / (2.0 * delta);
  const double es_rate_num = (ep.e_s - em.e_s) / (2.0 * delta);
  REQUIRE(ed_rate_num == Approx(v_l * std::sin(theta_e)).margin(1e-3));
  REQUIRE(es_rate_num == Approx(v_l * std::cos(theta_e)).margin(1e-3));
}
