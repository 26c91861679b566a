#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lava/world.hpp"

using namespace lava;

namespace {

// Reference trapezoid integrator: fixed fine step, explicit accel/cruise/brake phases
// decided from the stopping distance rather than from a speed envelope.
std::vector<double> reference_trapezoid(double distance, double v_max, double accel, int horizon,
                                        double period, double dt) {
  std::vector<double> out;
  double s = 0.0;
  double v = 0.0;
  const auto per_step = static_cast<long>(std::llround(period / dt));
  for (int k = 0; k < horizon; ++k) {
    for (long i = 0; i < per_step; ++i) {
      const double remaining = distance - s;
      if (remaining <= 0.0) {
        s = distance;
        v = 0.0;
        break;
      }
      const double stopping = v * v / (2.0 * accel);
      double a = 0.0;
      if (stopping >= remaining) {
        a = -accel;
      } else if (v < v_max) {
        a = accel;
      }
      double v_next = std::clamp(v + a * dt, 0.0, v_max);
      double ds = 0.5 * (v + v_next) * dt;
      if (v_next == 0.0 && a < 0.0) ds = std::min(ds, remaining);
      s = std::min(s + ds, distance);
      v = v_next;
    }
    out.push_back(s);
  }
  return out;
}

Area big_area() { return Area{-1000.0, 1000.0, -1000.0, 1000.0}; }

}  // namespace

TEST_CASE("rollout to the current position is the identity") {
  UavKinematics kin;
  UavState start{{10.0, 20.0, kin.altitude}, 1.25, 0.0};
  const auto poses = uav_rollout(start, {10.0, 20.0}, kin, 11, 1.0, big_area());
  REQUIRE(poses.size() == 11);
  for (const auto& p : poses) {
    CHECK(p == start);
  }
}

TEST_CASE("rollout with effectively infinite acceleration cruises at v_max") {
  UavKinematics kin;
  kin.v_max = 5.0;
  kin.accel = 1e9;
  UavState start{{0.0, 0.0, kin.altitude}, 0.0, 0.0};
  const auto poses = uav_rollout(start, {100.0, 0.0}, kin, 11, 1.0, big_area());
  REQUIRE(poses.size() == 11);
  for (int k = 1; k <= 11; ++k) {
    CHECK(poses[k - 1].position.x == doctest::Approx(5.0 * k).epsilon(1e-6));
    CHECK(poses[k - 1].position.y == doctest::Approx(0.0));
  }
}

TEST_CASE("rollout tracks a fine-step trapezoid reference") {
  UavKinematics kin;
  kin.v_max = 5.0;
  kin.accel = 2.0;
  UavState start{{0.0, 0.0, kin.altitude}, 0.0, 0.0};
  const auto poses = uav_rollout(start, {20.0, 0.0}, kin, 11, 1.0, big_area());
  const auto ref = reference_trapezoid(20.0, 5.0, 2.0, 11, 1.0, 1e-4);
  REQUIRE(poses.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(std::abs(poses[i].position.x - ref[i]) < 0.05);
  }
  CHECK(poses.back().position.x == doctest::Approx(20.0));
  CHECK(poses.back().speed == 0.0);
}

TEST_CASE("rollout never overshoots and heading follows travel") {
  UavKinematics kin;
  const Vec2 goal{-30.0, 40.0};
  UavState start{{0.0, 0.0, kin.altitude}, 0.3, 4.0};
  const auto poses = uav_rollout(start, goal, kin, 20, 1.0, big_area());
  double prev = 0.0;
  for (const auto& p : poses) {
    const double along = std::hypot(p.position.x, p.position.y);
    CHECK(along >= prev - 1e-12);
    CHECK(along <= 50.0 + 1e-9);
    CHECK(p.heading == doctest::Approx(std::atan2(40.0, -30.0)));
    CHECK(p.speed >= 0.0);
    CHECK(p.speed <= kin.v_max);
    CHECK(p.position.z == kin.altitude);
    prev = along;
  }
  CHECK(poses.back().position.x == doctest::Approx(-30.0));
  CHECK(poses.back().position.y == doctest::Approx(40.0));
}

TEST_CASE("rollout path length respects the kinematic bound") {
  Rng rng(99);
  std::uniform_real_distribution<double> coord(-900.0, 900.0);
  std::uniform_real_distribution<double> speed(0.0, 5.0);
  UavKinematics kin;
  const Area area = big_area();
  for (int trial = 0; trial < 200; ++trial) {
    UavState start{{coord(rng), coord(rng), kin.altitude}, 0.0, speed(rng)};
    const Vec2 wp{coord(rng), coord(rng)};
    const auto poses = uav_rollout(start, wp, kin, 11, 1.0, area);
    double length = 0.0;
    Vec2 last = start.position.xy();
    for (const auto& p : poses) {
      length += horizontal_distance(last, p.position.xy());
      last = p.position.xy();
      CHECK(area.contains(p.position));
    }
    CHECK(length <= kin.v_max * 11 * 1.0 + 0.5 * kin.v_max * kin.v_max / kin.accel + 1e-9);
  }
}

TEST_CASE("rollout clamps waypoints and is bit-deterministic") {
  UavKinematics kin;
  const Area area{0.0, 100.0, 0.0, 100.0};
  UavState start{{90.0, 50.0, kin.altitude}, 0.0, 0.0};
  const auto a = uav_rollout(start, {500.0, 50.0}, kin, 11, 1.0, area);
  const auto b = uav_rollout(start, {500.0, 50.0}, kin, 11, 1.0, area);
  CHECK(a == b);
  CHECK(a.back().position.x == doctest::Approx(100.0));
  for (const auto& p : a) CHECK(area.contains(p.position));
}

TEST_CASE("kinematics validation") {
  UavKinematics kin;
  CHECK_NOTHROW(kin.validate());
  kin.integration_dt = 0.02;
  CHECK_THROWS(kin.validate());
  kin = {};
  kin.v_max = 0.0;
  CHECK_THROWS(kin.validate());
  TargetDynamics dyn;
  dyn.process_noise_var.z = 0.5;
  CHECK_THROWS(dyn.validate());
}

TEST_CASE("target_step with zero noise is the identity") {
  TargetDynamics dyn;
  dyn.process_noise_var = {0.0, 0.0, 0.0};
  ObjectState s{{12.0, 34.0, 1.0}, 3};
  Rng rng(5);
  CHECK(target_step(s, dyn, Area{}, rng) == s);
}

TEST_CASE("target_step is reproducible from a fresh stream") {
  TargetDynamics dyn;
  ObjectState s{{500.0, 500.0, 1.0}, 1};
  Rng a(42);
  Rng b(42);
  CHECK(target_step(s, dyn, Area{}, a) == target_step(s, dyn, Area{}, b));
}

TEST_CASE("target_step displacement statistics") {
  TargetDynamics dyn;
  const ObjectState s{{500.0, 500.0, 1.0}, 1};
  Rng rng(2024);
  const int n = 100000;
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const auto next = target_step(s, dyn, Area{}, rng);
    const double dx = next.position.x - 500.0;
    const double dy = next.position.y - 500.0;
    CHECK(next.position.z == 1.0);
    sx += dx;
    sy += dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double mx = sx / n;
  const double my = sy / n;
  const double vx = sxx / n - mx * mx;
  const double vy = syy / n - my * my;
  CHECK(std::abs(mx) < 0.02);
  CHECK(std::abs(my) < 0.02);
  CHECK(std::abs(vx - 1.0) < 0.03);
  CHECK(std::abs(vy - 1.0) < 0.03);
}

TEST_CASE("target walk stays in the area and keeps its height") {
  TargetDynamics dyn;
  dyn.process_noise_var = {25.0, 25.0, 0.0};
  const Area area{0.0, 50.0, 0.0, 50.0};
  ObjectState s{{1.0, 49.0, 1.0}, 1};
  Rng rng(8);
  for (int i = 0; i < 5000; ++i) {
    s = target_step(s, dyn, area, rng);
    REQUIRE(area.contains(s.position));
    REQUIRE(s.position.z == 1.0);
  }
}

TEST_CASE("normalize_heading wraps into [0, 2pi)") {
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK(normalize_heading(0.0) == 0.0);
  CHECK(normalize_heading(-1e-18) < two_pi);
  CHECK(normalize_heading(-std::numbers::pi / 2) == doctest::Approx(1.5 * std::numbers::pi));
  CHECK(normalize_heading(5 * two_pi + 1.0) == doctest::Approx(1.0));
}
