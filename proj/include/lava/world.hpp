#pragma once

#include <vector>

#include "lava/geometry.hpp"
#include "lava/rng.hpp"

namespace lava {

/// Observer pose plus scalar ground speed. Heading is in [0, 2pi), zero along +x.
struct UavState {
  Vec3 position;
  double heading = 0.0;
  double speed = 0.0;

  friend bool operator==(const UavState&, const UavState&) = default;
};

/// True position of one radio tag.
struct ObjectState {
  Vec3 position;
  int tag_id = 1;

  friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

struct UavKinematics {
  double v_max = 5.0;            // m/s
  double accel = 2.5;            // m/s^2, same magnitude for braking
  double altitude = 30.0;        // m AGL
  double integration_dt = 1e-3;  // s

  void validate() const;
};

/// Random-walk target model: x_k = x_{k-1} + N(0, diag(process_noise_var)).
struct TargetDynamics {
  Vec3 process_noise_var{1.0, 1.0, 0.0};  // m^2 per step
  double step_period = 1.0;               // s

  void validate() const;
};

/**
 * Flies the UAV toward `waypoint` for `horizon_steps * step_period` seconds.
 *
 * Forward-Euler integration at `kin.integration_dt` of a trapezoidal speed
 * profile along the straight line to the (area-clamped) waypoint: accelerate
 * up to v_max, cruise, then brake so the UAV stops on the waypoint. Returns the
 * pose at the end of each step period; z is held at `kin.altitude`.
 */
std::vector<UavState> uav_rollout(const UavState& current, const Vec2& waypoint,
                                  const UavKinematics& kin, int horizon_steps,
                                  double step_period, const Area& area);

/// One random-walk step of a tag, clamped to the mission area. z never changes.
ObjectState target_step(const ObjectState& state, const TargetDynamics& dyn,
                        const Area& area, Rng& rng);

}  // namespace lava
