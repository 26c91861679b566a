#include "lava/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lava {

void UavKinematics::validate() const {
  if (!(v_max > 0.0)) throw std::invalid_argument("kinematics: v_max must be > 0");
  if (!(accel > 0.0)) throw std::invalid_argument("kinematics: accel must be > 0");
  if (!(integration_dt > 0.0) || integration_dt > 0.01)
    throw std::invalid_argument("kinematics: integration_dt must be in (0, 0.01] s");
  if (!std::isfinite(altitude)) throw std::invalid_argument("kinematics: altitude must be finite");
}

void TargetDynamics::validate() const {
  if (!(process_noise_var.x >= 0.0) || !(process_noise_var.y >= 0.0))
    throw std::invalid_argument("dynamics: process noise variances must be >= 0");
  if (process_noise_var.z != 0.0)
    throw std::invalid_argument("dynamics: z process noise must be 0 (fixed tag height)");
  if (!(step_period > 0.0)) throw std::invalid_argument("dynamics: step_period must be > 0");
}

std::vector<UavState> uav_rollout(const UavState& current, const Vec2& waypoint,
                                  const UavKinematics& kin, int horizon_steps,
                                  double step_period, const Area& area) {
  std::vector<UavState> poses;
  if (horizon_steps < 1) return poses;
  poses.reserve(static_cast<std::size_t>(horizon_steps));

  const Vec2 goal = area.clamp(waypoint);
  const double dx = goal.x - current.position.x;
  const double dy = goal.y - current.position.y;
  const double total = std::hypot(dx, dy);

  UavState pose = current;
  pose.position.z = kin.altitude;
  pose.heading = normalize_heading(current.heading);

  if (total == 0.0) {
    pose.speed = 0.0;
    poses.assign(static_cast<std::size_t>(horizon_steps), pose);
    return poses;
  }

  const double ux = dx / total;
  const double uy = dy / total;
  pose.heading = normalize_heading(std::atan2(dy, dx));

  const double dt = kin.integration_dt;
  const auto substeps = static_cast<long>(std::llround(step_period / dt));
  const Vec2 start = current.position.xy();
  double travelled = 0.0;
  double v = std::min(std::max(current.speed, 0.0), kin.v_max);

  for (int step = 0; step < horizon_steps; ++step) {
    for (long i = 0; i < substeps && travelled < total; ++i) {
      const double remaining = total - travelled;
      // Speed is capped by the braking envelope so the UAV halts on the goal.
      v = std::min({kin.v_max, v + kin.accel * dt, std::sqrt(2.0 * kin.accel * remaining)});
      const double advance = v * dt;
      if (advance >= remaining) {
        travelled = total;
        v = 0.0;
      } else {
        travelled += advance;
      }
    }
    pose.position.x = start.x + ux * travelled;
    pose.position.y = start.y + uy * travelled;
    if (travelled >= total) {
      pose.position.x = goal.x;
      pose.position.y = goal.y;
      v = 0.0;
    }
    pose.speed = v;
    poses.push_back(pose);
  }
  return poses;
}

ObjectState target_step(const ObjectState& state, const TargetDynamics& dyn,
                        const Area& area, Rng& rng) {
  ObjectState next = state;
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (dyn.process_noise_var.x > 0.0) next.position.x += std::sqrt(dyn.process_noise_var.x) * gauss(rng);
  if (dyn.process_noise_var.y > 0.0) next.position.y += std::sqrt(dyn.process_noise_var.y) * gauss(rng);
  next.position = area.clamp(next.position);
  return next;
}

}  // namespace lava
