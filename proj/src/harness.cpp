#include "lava/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace lava {

void ScenarioConfig::validate() const {
  try {
    if (!area.valid()) throw ConfigError("area: x_max/y_max must exceed x_min/y_min");
    if (tag_count < 1) throw ConfigError("tags: count must be >= 1");
    if (!tag_positions.empty()) {
      if (tag_positions.size() != static_cast<std::size_t>(tag_count))
        throw ConfigError("tags: positions must list exactly `count` entries");
      for (const auto& p : tag_positions)
        if (!area.contains(p)) throw ConfigError("tags: initial position outside the area");
    }
    if (!tag_frequencies_mhz.empty()) {
      if (tag_frequencies_mhz.size() != static_cast<std::size_t>(tag_count))
        throw ConfigError("tags: frequencies must list exactly `count` entries");
      for (double f : tag_frequencies_mhz)
        if (!(f > 0.0)) throw ConfigError("tags: frequencies must be > 0");
    }
    if (!(tag_height >= 0.0)) throw ConfigError("tags: height must be >= 0");
    if (uav_start && !area.contains(*uav_start)) throw ConfigError("uav: start outside the area");
    if (!(max_flight_time >= 0.0) || !std::isfinite(max_flight_time))
      throw ConfigError("max_flight_time must be finite and >= 0");
    void_cfg.validate();
    tracker.validate();
    rf.validate();
    dynamics.validate();
    kinematics.validate();
    planner.validate();
    if (dynamics.step_period != void_cfg.step_period)
      throw ConfigError("dynamics and planner must share the same step period");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

Vec2 ScenarioConfig::start_position() const {
  if (uav_start) return *uav_start;
  return {0.5 * (area.x_min + area.x_max), 0.5 * (area.y_min + area.y_max)};
}

double ScenarioConfig::tag_frequency_mhz(int tag_index) const {
  if (!tag_frequencies_mhz.empty()) return tag_frequencies_mhz[static_cast<std::size_t>(tag_index)];
  return 150.0 + std::fmod(0.2 * tag_index, 2.0);
}

PropagationConfig ScenarioConfig::tag_rf(int tag_index) const {
  PropagationConfig out = rf;
  // An explicit frequency list overrides the configured wavelength.
  if (!tag_frequencies_mhz.empty()) out.wavelength_m = wavelength_for_mhz(tag_frequency_mhz(tag_index));
  return out;
}

long ScenarioConfig::step_budget() const {
  return static_cast<long>(std::floor(max_flight_time / void_cfg.step_period + 1e-9));
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Escape: return "escape";
    case EventKind::Fallback: return "fallback";
    case EventKind::Divergence: return "divergence";
    case EventKind::VoidAudit: return "void_audit";
  }
  return "unknown";
}

TimingStats summarize(std::span<const double> samples) {
  TimingStats t;
  t.count = samples.size();
  if (samples.empty()) return t;
  const MetricStats m = metric_stats(samples);
  t.mean = m.mean;
  t.min = m.min;
  t.max = m.max;
  t.median = m.median;
  return t;
}

MetricStats metric_stats(std::span<const double> values) {
  MetricStats m;
  if (values.empty()) return m;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  m.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  m.min = sorted.front();
  m.max = sorted.back();
  const std::size_t n = sorted.size();
  m.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return m;
}

double compute_rms(std::span<const Vec3> estimates, std::span<const Vec3> truths) {
  if (estimates.size() != truths.size())
    throw std::invalid_argument("compute_rms: estimates and truths differ in length");
  if (estimates.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double d = distance(estimates[i], truths[i]);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(estimates.size()));
}

namespace {

struct TagRuntime {
  ObjectState truth;
  PropagationConfig rf;
  Rng motion_rng;
  Rng measurement_rng;
  Rng belief_rng;
};

}  // namespace

MissionRecord run_mission(const ScenarioConfig& cfg) {
  cfg.validate();

  const double step_period = cfg.step_period();
  const long budget = cfg.step_budget();
  const double gate_radius = planning_radius(cfg.void_cfg, cfg.planner);

  Rng init_rng = make_stream(cfg.seed, {stream::kTruthInit});
  std::uniform_real_distribution<double> ux(cfg.area.x_min, cfg.area.x_max);
  std::uniform_real_distribution<double> uy(cfg.area.y_min, cfg.area.y_max);

  std::vector<TagRuntime> tags;
  std::vector<ObjectBelief> beliefs;
  tags.reserve(static_cast<std::size_t>(cfg.tag_count));
  beliefs.reserve(static_cast<std::size_t>(cfg.tag_count));
  for (int i = 0; i < cfg.tag_count; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    Vec2 start;
    if (cfg.tag_positions.empty()) {
      start.x = ux(init_rng);
      start.y = uy(init_rng);
    } else {
      start = cfg.tag_positions[static_cast<std::size_t>(i)];
    }
    TagRuntime t{ObjectState{{start.x, start.y, cfg.tag_height}, i + 1},
                 cfg.tag_rf(i),
                 make_stream(cfg.seed, {stream::kTruthMotion, idx}),
                 make_stream(cfg.seed, {stream::kMeasurement, idx}),
                 make_stream(cfg.seed, {stream::kBelief, idx})};
    beliefs.push_back(init_belief(i + 1, cfg.area, cfg.tag_height, cfg.tracker, t.belief_rng));
    tags.push_back(std::move(t));
  }

  const Vec2 start = cfg.start_position();
  UavState uav{{start.x, start.y, cfg.kinematics.altitude}, normalize_heading(cfg.uav_start_heading), 0.0};

  PlanningContext ctx;
  ctx.area = cfg.area;
  ctx.kinematics = cfg.kinematics;
  ctx.void_cfg = cfg.void_cfg;
  ctx.void_cfg.r_min = gate_radius;
  ctx.sigma_min = cfg.tracker.sigma_min;

  MissionRecord record;
  record.summary.tags.resize(tags.size());
  std::vector<double> planning_times;

  std::vector<UavState> active_plan;
  std::size_t cursor = 0;

  auto decide = [&](long k, StepRow* row) {
    const auto t0 = std::chrono::steady_clock::now();
    auto action = plan(beliefs, uav, ctx, cfg.planner, cfg.rf);
    const auto t1 = std::chrono::steady_clock::now();
    if (!action) return;
    const double elapsed = std::chrono::duration<double>(t1 - t0).count();
    planning_times.push_back(elapsed);

    Decision d;
    d.k = k;
    d.label = action->label;
    d.waypoint = action->waypoint;
    d.void_prob = action->void_prob;
    d.planning_time_s = elapsed;
    d.fallback = action->fallback();
    d.satisfies_bound = action->void_prob >= cfg.void_cfg.b_min;

    if (d.fallback) {
      ++record.summary.fallback_decisions;
      record.events.push_back({k, action->label == ActionLabel::Escape ? EventKind::Escape : EventKind::Fallback,
                               0, action->void_prob});
    } else if (cfg.planner.void_enabled &&
               !verify_proposition1(*action, beliefs, gate_radius, cfg.void_cfg.b_min)) {
      ++record.summary.void_audit_failures;
      record.events.push_back({k, EventKind::VoidAudit, 0, action->void_prob});
    }
    record.decisions.push_back(d);
    if (row) {
      row->planning_time_s = elapsed;
      row->void_prob = action->void_prob;
    }
    active_plan = std::move(action->rollout);
    cursor = 0;
  };

  auto all_localized = [&] {
    return std::all_of(beliefs.begin(), beliefs.end(), [](const ObjectBelief& b) { return b.localized; });
  };

  if (budget > 0) decide(0, nullptr);

  long final_k = budget;
  bool finished = false;
  for (long k = 1; k <= budget; ++k) {
    if (!cfg.stationary_tags)
      for (auto& t : tags) t.truth = target_step(t.truth, cfg.dynamics, cfg.area, t.motion_rng);

    if (cursor < active_plan.size()) {
      uav = active_plan[cursor++];
    } else {
      uav.speed = 0.0;
    }

    StepRow row;
    row.k = k;
    row.uav = uav;
    row.tags.resize(tags.size());
    for (std::size_t i = 0; i < tags.size(); ++i) {
      auto& t = tags[i];
      auto& belief = beliefs[i];
      const Measurement z = sample_measurement(t.truth, uav, t.rf, t.measurement_rng, k);
      predict(belief, cfg.dynamics, cfg.area, t.belief_rng);
      if (!update(belief, z, uav, t.rf)) {
        ++record.summary.divergence_events;
        record.events.push_back({k, EventKind::Divergence, belief.tag_id, 0.0});
      }
      resample_if_needed(belief, cfg.tracker, t.belief_rng);

      const Vec3 est = estimate(belief);
      const double sigma = uncertainty(belief);
      if (!belief.localized && sigma < cfg.tracker.sigma_min) {
        belief.localized = true;
        auto& s = record.summary.tags[i];
        s.localized = true;
        s.localized_step = k;
        s.estimate = est;
        s.truth = t.truth.position;
        s.sigma = sigma;
      }
      row.tags[i] = TagStep{z.rssi_dbm, est, sigma, belief.localized, t.truth.position};
    }

    if (all_localized()) {
      record.rows.push_back(std::move(row));
      final_k = k;
      finished = true;
      break;
    }
    if (k % cfg.void_cfg.horizon == 0) decide(k, &row);
    record.rows.push_back(std::move(row));
  }

  auto& summary = record.summary;
  summary.all_localized = finished;
  summary.flight_time_s = finished ? static_cast<double>(final_k) * step_period : cfg.max_flight_time;
  std::vector<Vec3> est_at, truth_at;
  double sigma_sum = 0.0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    auto& s = summary.tags[i];
    s.tag_id = beliefs[i].tag_id;
    if (!s.localized) {
      s.estimate = estimate(beliefs[i]);
      s.truth = tags[i].truth.position;
      s.sigma = uncertainty(beliefs[i]);
    }
    s.error = distance(s.estimate, s.truth);
    est_at.push_back(s.estimate);
    truth_at.push_back(s.truth);
    sigma_sum += s.sigma;
  }
  summary.rms = compute_rms(est_at, truth_at);
  summary.mean_sigma = sigma_sum / static_cast<double>(tags.size());
  summary.planning_time = summarize(planning_times);
  summary.decisions = record.decisions.size();
  return record;
}

HeatMap::HeatMap(const Area& a, double bin) : bin_size(bin), area(a) {
  nx = std::max(1, static_cast<int>(std::ceil(a.width() / bin - 1e-9)));
  ny = std::max(1, static_cast<int>(std::ceil(a.height() / bin - 1e-9)));
  counts.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
}

void HeatMap::add(const Vec2& p) {
  const int ix = std::clamp(static_cast<int>(std::floor((p.x - area.x_min) / bin_size)), 0, nx - 1);
  const int iy = std::clamp(static_cast<int>(std::floor((p.y - area.y_min) / bin_size)), 0, ny - 1);
  ++counts[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix)];
}

std::uint64_t HeatMap::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

}  // namespace lava
