#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lava/planner.hpp"
#include "lava/rf.hpp"
#include "lava/tracker.hpp"
#include "lava/world.hpp"

namespace lava {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  Area area;
  int tag_count = 10;
  std::vector<Vec2> tag_positions;          // empty: uniform random inside the area
  std::vector<double> tag_frequencies_mhz;  // empty: 150.0, 150.2, ...
  double tag_height = 1.0;
  bool stationary_tags = false;             // truth stays put; the filter still assumes a random walk
  std::optional<Vec2> uav_start;            // default: area centre
  double uav_start_heading = 0.0;
  double max_flight_time = 3000.0;          // s
  VoidConfig void_cfg;
  TrackerConfig tracker;
  PropagationConfig rf;
  TargetDynamics dynamics;
  UavKinematics kinematics;
  PlannerSpec planner;
  std::uint64_t seed = 1;

  /// Throws ConfigError.
  void validate() const;

  Vec2 start_position() const;
  double tag_frequency_mhz(int tag_index) const;
  /// Propagation settings for one tag (wavelength follows the tag frequency).
  PropagationConfig tag_rf(int tag_index) const;
  double step_period() const { return void_cfg.step_period; }
  long step_budget() const;
};

struct TagStep {
  double rssi_dbm = 0.0;
  Vec3 estimate;
  double sigma = 0.0;
  bool localized = false;
  Vec3 truth;
};

struct StepRow {
  long k = 0;
  UavState uav;
  std::vector<TagStep> tags;
  std::optional<double> planning_time_s;
  std::optional<double> void_prob;
};

struct Decision {
  long k = 0;
  ActionLabel label = ActionLabel::Stay;
  Vec2 waypoint;
  double void_prob = 1.0;
  double planning_time_s = 0.0;
  bool fallback = false;
  bool satisfies_bound = true;
};

enum class EventKind { Escape, Fallback, Divergence, VoidAudit };

struct MissionEvent {
  long k = 0;
  EventKind kind = EventKind::Fallback;
  int tag_id = 0;  // 0 when not tag-specific
  double value = 0.0;
};

std::string_view to_string(EventKind kind);

struct TagSummary {
  int tag_id = 1;
  bool localized = false;
  long localized_step = -1;
  Vec3 estimate;   // at localisation, or at mission end
  Vec3 truth;      // same instant
  double sigma = 0.0;
  double error = 0.0;

  friend bool operator==(const TagSummary&, const TagSummary&) = default;
};

struct TimingStats {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;

  friend bool operator==(const TimingStats&, const TimingStats&) = default;
};

TimingStats summarize(std::span<const double> samples);

struct MissionSummary {
  std::vector<TagSummary> tags;
  double rms = 0.0;
  double mean_sigma = 0.0;
  double flight_time_s = 0.0;
  bool all_localized = false;
  TimingStats planning_time;
  std::size_t decisions = 0;
  std::size_t fallback_decisions = 0;
  std::size_t void_audit_failures = 0;
  std::size_t divergence_events = 0;

  friend bool operator==(const MissionSummary&, const MissionSummary&) = default;
};

struct MissionRecord {
  std::vector<StepRow> rows;
  std::vector<Decision> decisions;
  std::vector<MissionEvent> events;
  MissionSummary summary;
};

/// Closed simulate -> measure -> track -> plan loop for one scenario.
MissionRecord run_mission(const ScenarioConfig& cfg);

/// Root-mean-square 3D distance between matched estimates and truths.
double compute_rms(std::span<const Vec3> estimates, std::span<const Vec3> truths);

/// UAV visit counts on a fixed-size grid over the mission area.
struct HeatMap {
  double bin_size = 10.0;
  Area area;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint64_t> counts;  // row-major, y outer

  HeatMap() = default;
  HeatMap(const Area& area, double bin_size);
  void add(const Vec2& p);
  std::uint64_t total() const;
};

struct MetricStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

MetricStats metric_stats(std::span<const double> values);

struct PlannerBatch {
  PlannerSpec planner;
  std::vector<MissionSummary> trials;
  MetricStats rms;
  MetricStats mean_sigma;
  MetricStats flight_time_s;
  MetricStats planning_time_s;  // per-trial mean decision time
  HeatMap heatmap;
  std::size_t decisions = 0;
  std::size_t fallback_decisions = 0;
  std::size_t void_audit_failures = 0;
  /// Recorded UAV poses closer than r_min (horizontal) to the truth of a tag
  /// whose belief has already converged (localized) at that step.
  std::uint64_t close_approaches = 0;
  std::optional<double> min_converged_distance;
};

struct McSummary {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<PlannerBatch> planners;
};

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

/**
 * Runs `trials` missions per planner spec on matched per-trial seeds.
 * Trials run on up to `parallelism` threads; the result does not depend on it.
 * An empty `planners` list means just cfg.planner.
 */
McSummary run_montecarlo(const ScenarioConfig& cfg, std::size_t trials, std::size_t parallelism,
                         std::span<const PlannerSpec> planners = {});

struct BenchConfig {
  std::size_t particles = 10000;
  int tags = 10;
  int actions = 12;
  int horizon = 11;
  std::size_t repetitions = 20;
  std::uint64_t seed = 7;
};

struct BenchRow {
  PlannerKind kind = PlannerKind::LavaPilot;
  std::vector<double> samples_s;
  TimingStats stats;
  std::uint64_t likelihood_calls = 0;
};

struct BenchResult {
  BenchConfig config;
  std::vector<BenchRow> rows;
};

/// Times one planning decision per planner on identical belief snapshots.
BenchResult bench_planners(const BenchConfig& cfg);

}  // namespace lava
