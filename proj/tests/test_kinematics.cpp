#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "utv/kinematics.hpp"

using Catch::Approx;
using namespace utv;

namespace {
const VehicleParams kJaguar{0.3, 0.7, 5.0};
}

TEST_CASE("forward kinematics, symmetric wheels without slip") {
  const double w = 2.0 / 0.3;  // wheel speed for 2 m/s
  const Twist t = forward_kinematics({w, w}, {1.0, 1.0}, kJaguar);
  REQUIRE(t.v == Approx(2.0).epsilon(1e-12));
  REQUIRE(t.thetadot == Approx(0.0).margin(1e-12));
}

TEST_CASE("forward kinematics, opposite wheels spin in place") {
  const double w = 2.0 / 0.3;
  const Twist t = forward_kinematics({w, -w}, {1.0, 1.0}, kJaguar);
  REQUIRE(t.v == Approx(0.0).margin(1e-12));
  REQUIRE(t.thetadot == Approx(40.0 / 7.0).epsilon(1e-12));  // 5.714
}

TEST_CASE("forward kinematics with asymmetric slip") {
  const double w = 2.0 / 0.3;
  const Twist t = forward_kinematics({w, w}, {0.5, 1.0}, kJaguar);
  REQUIRE(t.v == Approx(1.5).epsilon(1e-12));
  REQUIRE(t.thetadot == Approx(-10.0 / 7.0).epsilon(1e-12));  // -1.4286
}

TEST_CASE("inverse kinematics examples") {
  const WheelSpeeds straight = inverse_kinematics({2.0, 0.0}, kJaguar);
  REQUIRE(straight.right == Approx(20.0 / 3.0).epsilon(1e-12));
  REQUIRE(straight.left == Approx(20.0 / 3.0).epsilon(1e-12));

  const WheelSpeeds turn = inverse_kinematics({0.0, 5.0}, kJaguar);
  REQUIRE(turn.right == Approx(3.5 / 0.6).epsilon(1e-12));  // 5.833
  REQUIRE(turn.left == Approx(-3.5 / 0.6).epsilon(1e-12));

  const WheelSpeeds rest = inverse_kinematics({0.0, 0.0}, kJaguar);
  REQUIRE(rest.right == 0.0);
  REQUIRE(rest.left == 0.0);
}

TEST_CASE("forward/inverse round trip with unit slip") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const Twist cmd{dist(rng), dist(rng)};
    const Twist back = forward_kinematics(inverse_kinematics(cmd, kJaguar), {1.0, 1.0}, kJaguar);
    REQUIRE(back.v == Approx(cmd.v).margin(1e-12));
    REQUIRE(back.thetadot == Approx(cmd.thetadot).margin(1e-12));
  }
}

TEST_CASE("joint slip scaling scales both rates linearly") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  std::uniform_real_distribution<double> adist(0.1, 1.0);
  for (int i = 0; i < 100; ++i) {
    const WheelSpeeds w{dist(rng), dist(rng)};
    const SlipCoefficients a{adist(rng), adist(rng)};
    const double k = 0.5;
    const Twist base = forward_kinematics(w, a, kJaguar);
    const Twist scaled = forward_kinematics(w, {k * a.right, k * a.left}, kJaguar);
    REQUIRE(scaled.v == Approx(k * base.v).margin(1e-12));
    REQUIRE(scaled.thetadot == Approx(k * base.thetadot).margin(1e-12));
  }
}

TEST_CASE("pose integration: straight line") {
  const VehicleState out = integrate_pose({0, 0, 0}, {2.0, 0.0}, 1.0);
  REQUIRE(out.x == Approx(2.0).margin(1e-9));
  REQUIRE(out.y == Approx(0.0).margin(1e-12));
  REQUIRE(out.theta == Approx(0.0).margin(1e-12));
}

TEST_CASE("pose integration: pure rotation") {
  const VehicleState out = integrate_pose({0, 0, 0}, {0.0, 1.0}, M_PI_2);
  REQUIRE(out.x == Approx(0.0).margin(1e-9));
  REQUIRE(out.y == Approx(0.0).margin(1e-9));
  REQUIRE(out.theta == Approx(M_PI_2).margin(1e-12));
}

TEST_CASE("pose integration matches closed-form arcs at 1 ms substeps") {
  // unit circle quarter
  VehicleState out = integrate_pose({0, 0, 0}, {1.0, 1.0}, M_PI_2);
  REQUIRE(out.x == Approx(1.0).margin(1e-6));
  REQUIRE(out.y == Approx(1.0).margin(1e-6));
  REQUIRE(out.theta == Approx(M_PI_2).margin(1e-9));

  // general arc: radius v/omega
  const double v = 2.0, omega = 0.5, tf = 3.0;
  out = integrate_pose({0, 0, 0}, {v, omega}, tf);
  REQUIRE(out.x == Approx(v / omega * std::sin(omega * tf)).margin(1e-6));
  REQUIRE(out.y == Approx(v / omega * (1.0 - std::cos(omega * tf))).margin(1e-6));
}

TEST_CASE("invalid inputs are rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(forward_kinematics({nan, 0}, {1, 1}, kJaguar), std::invalid_argument);
  REQUIRE_THROWS_AS(inverse_kinematics({nan, 0}, kJaguar), std::invalid_argument);
  REQUIRE_THROWS_AS(forward_kinematics({0, 0}, {1, 1}, VehicleParams{-0.3, 0.7, 5.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(forward_kinematics({0, 0}, {1, 1}, VehicleParams{0.3, 0.0, 5.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(integrate_pose({0, 0, 0}, {1, 0}, -1.0), std::invalid_argument);
}
