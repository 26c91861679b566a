#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lava {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec2 xy() const { return {x, y}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double horizontal_distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double horizontal_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Wraps an angle into [0, 2pi).
inline double normalize_heading(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double h = std::fmod(radians, two_pi);
  if (h < 0.0) h += two_pi;
  // fmod can round a tiny negative input up to exactly 2pi.
  if (h >= two_pi) h = 0.0;
  return h;
}

/// Axis-aligned mission rectangle in the ground plane.
struct Area {
  double x_min = 0.0;
  double x_max = 1000.0;
  double y_min = 0.0;
  double y_max = 1000.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool valid() const { return x_max > x_min && y_max > y_min; }

  bool contains(const Vec2& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  bool contains(const Vec3& p) const { return contains(p.xy()); }

  Vec2 clamp(const Vec2& p) const {
    return {std::clamp(p.x, x_min, x_max), std::clamp(p.y, y_min, y_max)};
  }
  Vec3 clamp(const Vec3& p) const {
    return {std::clamp(p.x, x_min, x_max), std::clamp(p.y, y_min, y_max), p.z};
  }

  friend bool operator==(const Area&, const Area&) = default;
};

}  // namespace lava
