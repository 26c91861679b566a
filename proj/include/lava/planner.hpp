#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lava/rf.hpp"
#include "lava/tracker.hpp"
#include "lava/world.hpp"

namespace lava {

struct VoidConfig {
  double r_min = 50.0;     // m
  double b_min = 0.8;
  int horizon = 11;        // steps per decision epoch
  double step_period = 1.0;  // s
  int action_count = 12;

  void validate() const;
};

/// Radius that stands in for "no void constraint": the constraint is still
/// evaluated, it just never binds.
inline constexpr double kNoVoidRadius = 0.001;

enum class PlannerKind { LavaPilot, Renyi, Shannon };

struct PlannerSpec {
  PlannerKind kind = PlannerKind::LavaPilot;
  double renyi_alpha = 0.5;
  bool void_enabled = true;

  void validate() const;
};

std::string_view to_string(PlannerKind kind);
std::optional<PlannerKind> parse_planner_kind(std::string_view name);

/// r_min handed to the void test for this planner setting.
inline double planning_radius(const VoidConfig& cfg, const PlannerSpec& spec) {
  return spec.void_enabled ? cfg.r_min : kNoVoidRadius;
}

enum class ActionLabel { A, B, C, Discrete, Stay, Escape };

std::string_view to_string(ActionLabel label);

struct CandidateAction {
  Vec2 waypoint;
  std::vector<UavState> rollout;
  double void_prob = 1.0;
  ActionLabel label = ActionLabel::Stay;
  int index = -1;  // discrete heading index, or action_count for stay-in-place
  double reward = 0.0;
  bool gate_bypassed = false;  // escape or no-feasible-action fallback

  bool fallback() const { return gate_bypassed; }
};

/// Everything a planner needs besides the beliefs and the current pose.
struct PlanningContext {
  Area area;
  UavKinematics kinematics;
  VoidConfig void_cfg;  // r_min already resolved through planning_radius()
  double sigma_min = 35.0;
};

/// Horizontal distance from the particle to the pose is strictly below r_min.
inline bool in_void(const Vec3& particle, const UavState& pose, double r_min) {
  const double dx = particle.x - pose.position.x;
  const double dy = particle.y - pose.position.y;
  return dx * dx + dy * dy < r_min * r_min;
}

/// B = 1 - (total weight of particles inside the void disc around `pose`).
double void_probability(const ObjectBelief& belief, const UavState& pose, double r_min);

/// Minimum of void_probability over every (belief, pose) pair.
double trajectory_void_probability(std::span<const ObjectBelief> beliefs,
                                   std::span<const UavState> rollout, double r_min);

/**
 * Feasibility form of trajectory_void_probability used inside the planners.
 * Stops at the first belief that breaks the bound. When the result is true,
 * `*value` holds the exact trajectory void probability.
 */
bool meets_void_bound(std::span<const ObjectBelief> beliefs, std::span<const UavState> rollout,
                      double r_min, double b_min, double* value = nullptr);

/**
 * Waypoints on the void circle around `target`: A on the line of sight, then
 * the two tangent points B and C. If the UAV is already within r_min only the
 * radial escape point is returned.
 */
std::vector<Vec2> candidate_points_abc(const UavState& uav, const Vec2& target, double r_min);

/// Waypoints of the discrete heading set, range v_max * H * T0, clamped to the area.
std::vector<Vec2> discrete_waypoints(const UavState& uav, const PlanningContext& ctx);

/// Unlocalized belief with the smallest uncertainty (ties: lowest tag id), or nullopt.
std::optional<std::size_t> select_target(std::span<const ObjectBelief> beliefs, double sigma_min);

/// Task-based selection toward the least uncertain unlocalized tag. nullopt when all are localized.
std::optional<CandidateAction> lavapilot_select(std::span<const ObjectBelief> beliefs,
                                                const UavState& uav, const PlanningContext& ctx);

/// Particle Renyi divergence between prior weights and the pseudo-posterior.
double renyi_reward(std::span<const double> weights, std::span<const double> log_likelihoods,
                    double alpha);

/// Entropy of the prior weights minus entropy of the pseudo-posterior.
double shannon_reward(std::span<const double> weights, std::span<const double> log_likelihoods);

/// Information-gain baseline over the discrete heading set plus stay-in-place.
std::optional<CandidateAction> info_gain_select(std::span<const ObjectBelief> beliefs,
                                                const UavState& uav, const PlanningContext& ctx,
                                                const PlannerSpec& spec,
                                                const PropagationConfig& rf);

/// Dispatches on spec.kind.
std::optional<CandidateAction> plan(std::span<const ObjectBelief> beliefs, const UavState& uav,
                                    const PlanningContext& ctx, const PlannerSpec& spec,
                                    const PropagationConfig& rf);

/// The selected rollout keeps every belief's void probability at or above b_min.
bool verify_proposition1(const CandidateAction& selected, std::span<const ObjectBelief> beliefs,
                         double r_min, double b_min);

}  // namespace lava
