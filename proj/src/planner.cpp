#include "lava/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lava/detail/link_budget.hpp"

namespace lava {

void VoidConfig::validate() const {
  if (!(r_min > 0.0)) throw std::invalid_argument("void: r_min must be > 0");
  if (!(b_min >= 0.0 && b_min <= 1.0)) throw std::invalid_argument("void: b_min must be in [0, 1]");
  if (horizon < 1) throw std::invalid_argument("void: horizon must be >= 1");
  if (!(step_period > 0.0)) throw std::invalid_argument("void: step_period must be > 0");
  if (action_count < 3) throw std::invalid_argument("void: action_count must be >= 3");
}

void PlannerSpec::validate() const {
  if (kind == PlannerKind::Renyi && !(renyi_alpha > 0.0 && renyi_alpha != 1.0))
    throw std::invalid_argument("planner: renyi alpha must be in (0,1) or (1,inf)");
}

std::string_view to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::LavaPilot: return "lavapilot";
    case PlannerKind::Renyi: return "renyi";
    case PlannerKind::Shannon: return "shannon";
  }
  return "unknown";
}

std::optional<PlannerKind> parse_planner_kind(std::string_view name) {
  if (name == "lavapilot") return PlannerKind::LavaPilot;
  if (name == "renyi") return PlannerKind::Renyi;
  if (name == "shannon") return PlannerKind::Shannon;
  return std::nullopt;
}

std::string_view to_string(ActionLabel label) {
  switch (label) {
    case ActionLabel::A: return "A";
    case ActionLabel::B: return "B";
    case ActionLabel::C: return "C";
    case ActionLabel::Discrete: return "discrete";
    case ActionLabel::Stay: return "stay";
    case ActionLabel::Escape: return "escape";
  }
  return "unknown";
}

double void_probability(const ObjectBelief& belief, const UavState& pose, double r_min) {
  double inside = 0.0;
  for (std::size_t i = 0; i < belief.size(); ++i)
    if (in_void(belief.particles[i], pose, r_min)) inside += belief.weights[i];
  return 1.0 - inside;
}

bool meets_void_bound(std::span<const ObjectBelief> beliefs, std::span<const UavState> rollout,
                      double r_min, double b_min, double* value) {
  double best = 1.0;
  if (beliefs.empty() || rollout.empty()) {
    if (value) *value = best;
    return best >= b_min;
  }

  // Particles outside the rollout's bounding box grown by r_min cannot fall in any disc.
  double x_lo = rollout[0].position.x, x_hi = x_lo;
  double y_lo = rollout[0].position.y, y_hi = y_lo;
  for (const auto& u : rollout) {
    x_lo = std::min(x_lo, u.position.x);
    x_hi = std::max(x_hi, u.position.x);
    y_lo = std::min(y_lo, u.position.y);
    y_hi = std::max(y_hi, u.position.y);
  }
  x_lo -= r_min;
  x_hi += r_min;
  y_lo -= r_min;
  y_hi += r_min;

  std::vector<double> inside(rollout.size());
  for (const auto& belief : beliefs) {
    std::fill(inside.begin(), inside.end(), 0.0);
    for (std::size_t i = 0; i < belief.size(); ++i) {
      const Vec3& p = belief.particles[i];
      if (p.x <= x_lo || p.x >= x_hi || p.y <= y_lo || p.y >= y_hi) continue;
      const double w = belief.weights[i];
      for (std::size_t u = 0; u < rollout.size(); ++u)
        if (in_void(p, rollout[u], r_min)) inside[u] += w;
    }
    for (double s : inside) best = std::min(best, 1.0 - s);
    if (best < b_min) {
      if (value) *value = best;
      return false;
    }
  }
  if (value) *value = best;
  return true;
}

double trajectory_void_probability(std::span<const ObjectBelief> beliefs,
                                   std::span<const UavState> rollout, double r_min) {
  double value = 1.0;
  meets_void_bound(beliefs, rollout, r_min, -std::numeric_limits<double>::infinity(), &value);
  return value;
}

std::vector<Vec2> candidate_points_abc(const UavState& uav, const Vec2& target, double r_min) {
  const double dx = uav.position.x - target.x;
  const double dy = uav.position.y - target.y;
  const double d = std::hypot(dx, dy);
  if (d == 0.0) {
    return {{target.x + r_min * std::cos(uav.heading), target.y + r_min * std::sin(uav.heading)}};
  }
  const double ux = dx / d;
  const double uy = dy / d;
  const Vec2 a{target.x + r_min * ux, target.y + r_min * uy};
  if (d <= r_min) return {a};

  const double beta = std::acos(r_min / d);
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  const Vec2 b{target.x + r_min * (cb * ux - sb * uy), target.y + r_min * (sb * ux + cb * uy)};
  const Vec2 c{target.x + r_min * (cb * ux + sb * uy), target.y + r_min * (-sb * ux + cb * uy)};
  return {a, b, c};
}

std::vector<Vec2> discrete_waypoints(const UavState& uav, const PlanningContext& ctx) {
  const auto& vc = ctx.void_cfg;
  const double range = ctx.kinematics.v_max * vc.horizon * vc.step_period;
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(vc.action_count));
  for (int i = 0; i < vc.action_count; ++i) {
    const double heading = 2.0 * std::numbers::pi * i / vc.action_count;
    out.push_back(ctx.area.clamp(Vec2{uav.position.x + range * std::cos(heading),
                                      uav.position.y + range * std::sin(heading)}));
  }
  return out;
}

std::optional<std::size_t> select_target(std::span<const ObjectBelief> beliefs, double sigma_min) {
  std::optional<std::size_t> best;
  double best_sigma = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < beliefs.size(); ++j) {
    if (beliefs[j].localized) continue;
    const double s = uncertainty(beliefs[j]);
    if (s < sigma_min) continue;
    if (!best || s < best_sigma || (s == best_sigma && beliefs[j].tag_id < beliefs[*best].tag_id)) {
      best = j;
      best_sigma = s;
    }
  }
  return best;
}

namespace {

CandidateAction make_action(const UavState& uav, const Vec2& waypoint, ActionLabel label, int index,
                            const PlanningContext& ctx) {
  CandidateAction action;
  action.waypoint = ctx.area.clamp(waypoint);
  action.label = label;
  action.index = index;
  action.rollout = uav_rollout(uav, action.waypoint, ctx.kinematics, ctx.void_cfg.horizon,
                               ctx.void_cfg.step_period, ctx.area);
  return action;
}

/// No candidate clears the gate: take the heading (or stay) that keeps the most belief mass
/// outside the void. Holding position would leave the UAV inside a belief that only sharpens.
CandidateAction fallback_action(std::span<const ObjectBelief> beliefs, const UavState& uav,
                                const PlanningContext& ctx) {
  auto waypoints = discrete_waypoints(uav, ctx);
  waypoints.push_back(uav.position.xy());
  std::optional<CandidateAction> best;
  for (std::size_t c = 0; c < waypoints.size(); ++c) {
    const bool is_stay = c + 1 == waypoints.size();
    auto action = make_action(uav, waypoints[c], is_stay ? ActionLabel::Stay : ActionLabel::Discrete,
                              static_cast<int>(c), ctx);
    action.void_prob = trajectory_void_probability(beliefs, action.rollout, ctx.void_cfg.r_min);
    if (!best || action.void_prob > best->void_prob) best = std::move(action);
  }
  best->gate_bypassed = true;
  return std::move(*best);
}

}  // namespace

std::optional<CandidateAction> lavapilot_select(std::span<const ObjectBelief> beliefs,
                                                const UavState& uav, const PlanningContext& ctx) {
  const auto target_index = select_target(beliefs, ctx.sigma_min);
  if (!target_index) return std::nullopt;

  const auto& vc = ctx.void_cfg;
  const Vec2 target = estimate(beliefs[*target_index]).xy();
  const auto points = candidate_points_abc(uav, target, vc.r_min);

  if (points.size() == 1) {
    // Already inside the circle: leave radially without consulting the gate.
    auto escape = make_action(uav, points[0], ActionLabel::Escape, -1, ctx);
    escape.void_prob = trajectory_void_probability(beliefs, escape.rollout, vc.r_min);
    escape.gate_bypassed = true;
    return escape;
  }

  constexpr ActionLabel labels[] = {ActionLabel::A, ActionLabel::B, ActionLabel::C};
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto action = make_action(uav, points[i], labels[i], -1, ctx);
    if (meets_void_bound(beliefs, action.rollout, vc.r_min, vc.b_min, &action.void_prob))
      return action;
  }

  // argmin distance subject to the gate: try headings nearest-first, ties by index.
  const auto waypoints = discrete_waypoints(uav, ctx);
  std::vector<std::pair<double, int>> order;
  order.reserve(waypoints.size());
  for (std::size_t i = 0; i < waypoints.size(); ++i)
    order.emplace_back(horizontal_distance(waypoints[i], target), static_cast<int>(i));
  std::sort(order.begin(), order.end());

  std::optional<CandidateAction> best;
  for (const auto& [dist, i] : order) {
    auto action = make_action(uav, waypoints[static_cast<std::size_t>(i)], ActionLabel::Discrete, i, ctx);
    if (meets_void_bound(beliefs, action.rollout, vc.r_min, vc.b_min, &action.void_prob)) {
      best = std::move(action);
      break;
    }
  }
  if (best) return best;
  return fallback_action(beliefs, uav, ctx);
}

double renyi_reward(std::span<const double> weights, std::span<const double> log_likelihoods,
                    double alpha) {
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) shift = std::max(shift, log_likelihoods[i]);
  if (!std::isfinite(shift)) return 0.0;

  double powered = 0.0;
  double evidence = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    const double g = log_likelihoods[i] - shift;
    powered += weights[i] * std::exp(alpha * g);
    evidence += weights[i] * std::exp(g);
  }
  return (std::log(powered) - alpha * std::log(evidence)) / (alpha - 1.0);
}

namespace {
double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}
}  // namespace

double shannon_reward(std::span<const double> weights, std::span<const double> log_likelihoods) {
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) shift = std::max(shift, log_likelihoods[i]);
  if (!std::isfinite(shift)) return 0.0;

  std::vector<double> posterior(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    posterior[i] = weights[i] > 0.0 ? weights[i] * std::exp(log_likelihoods[i] - shift) : 0.0;
    total += posterior[i];
  }
  for (double& v : posterior) v /= total;
  return entropy(weights) - entropy(posterior);
}

std::optional<CandidateAction> info_gain_select(std::span<const ObjectBelief> beliefs,
                                                const UavState& uav, const PlanningContext& ctx,
                                                const PlannerSpec& spec,
                                                const PropagationConfig& rf) {
  std::vector<std::size_t> active;
  std::vector<Vec3> estimates;
  for (std::size_t j = 0; j < beliefs.size(); ++j) {
    if (beliefs[j].localized || uncertainty(beliefs[j]) < ctx.sigma_min) continue;
    active.push_back(j);
    estimates.push_back(estimate(beliefs[j]));
  }
  if (active.empty()) return std::nullopt;

  const auto& vc = ctx.void_cfg;
  auto waypoints = discrete_waypoints(uav, ctx);
  waypoints.push_back(uav.position.xy());

  std::optional<CandidateAction> best;
  std::vector<double> log_g;
  for (std::size_t c = 0; c < waypoints.size(); ++c) {
    const bool is_stay = c + 1 == waypoints.size();
    auto action = make_action(uav, waypoints[c], is_stay ? ActionLabel::Stay : ActionLabel::Discrete,
                              static_cast<int>(c), ctx);
    if (!meets_void_bound(beliefs, action.rollout, vc.r_min, vc.b_min, &action.void_prob)) continue;

    const UavState& terminal = action.rollout.back();
    const detail::LinkBudget link(terminal, rf);
    double reward = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const auto& belief = beliefs[active[a]];
      const double ideal = link.power(estimates[a]);
      if (std::isnan(ideal)) continue;
      log_g.resize(belief.size());
      for (std::size_t i = 0; i < belief.size(); ++i)
        log_g[i] = link.log_likelihood(ideal, belief.particles[i]);
      reward += spec.kind == PlannerKind::Renyi ? renyi_reward(belief.weights, log_g, spec.renyi_alpha)
                                                : shannon_reward(belief.weights, log_g);
    }
    action.reward = reward;
    if (!best || reward > best->reward) best = std::move(action);
  }
  if (best) return best;
  return fallback_action(beliefs, uav, ctx);
}

std::optional<CandidateAction> plan(std::span<const ObjectBelief> beliefs, const UavState& uav,
                                    const PlanningContext& ctx, const PlannerSpec& spec,
                                    const PropagationConfig& rf) {
  if (spec.kind == PlannerKind::LavaPilot) return lavapilot_select(beliefs, uav, ctx);
  return info_gain_select(beliefs, uav, ctx, spec, rf);
}

bool verify_proposition1(const CandidateAction& selected, std::span<const ObjectBelief> beliefs,
                         double r_min, double b_min) {
  return trajectory_void_probability(beliefs, selected.rollout, r_min) >= b_min;
}

}  // namespace lava
