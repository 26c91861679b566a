#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "lava/harness.hpp"

namespace lava {

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return derive_seed(master, {stream::kTrial, static_cast<std::uint64_t>(trial)});
}

namespace {

/// What a batch keeps from one mission; the full record is dropped.
struct TrialOutcome {
  MissionSummary summary;
  std::vector<Vec2> poses;
  std::uint64_t close_approaches = 0;
  double min_converged_distance = std::numeric_limits<double>::infinity();
};

TrialOutcome condense(const MissionRecord& record, double safe_radius) {
  TrialOutcome out;
  out.summary = record.summary;
  out.poses.reserve(record.rows.size());
  for (const auto& row : record.rows) {
    out.poses.push_back(row.uav.position.xy());
    for (const auto& tag : row.tags) {
      if (!tag.localized) continue;
      const double d = horizontal_distance(row.uav.position, tag.truth);
      out.min_converged_distance = std::min(out.min_converged_distance, d);
      if (d < safe_radius) ++out.close_approaches;
    }
  }
  return out;
}

}  // namespace

McSummary run_montecarlo(const ScenarioConfig& cfg, std::size_t trials, std::size_t parallelism,
                         std::span<const PlannerSpec> planners) {
  if (trials < 1) throw ConfigError("montecarlo: trials must be >= 1");
  cfg.validate();

  std::vector<PlannerSpec> specs(planners.begin(), planners.end());
  if (specs.empty()) specs.push_back(cfg.planner);
  for (const auto& s : specs) s.validate();

  const std::size_t jobs = specs.size() * trials;
  std::vector<TrialOutcome> outcomes(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        ScenarioConfig trial_cfg = cfg;
        trial_cfg.planner = specs[job / trials];
        trial_cfg.seed = trial_seed(cfg.seed, job % trials);
        outcomes[job] = condense(run_mission(trial_cfg), cfg.void_cfg.r_min);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  McSummary out;
  out.trials = trials;
  out.seed = cfg.seed;
  for (std::size_t p = 0; p < specs.size(); ++p) {
    PlannerBatch batch;
    batch.planner = specs[p];
    batch.heatmap = HeatMap(cfg.area, 10.0);
    std::vector<double> rms, sigma, flight, planning;
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      auto& o = outcomes[p * trials + t];
      rms.push_back(o.summary.rms);
      sigma.push_back(o.summary.mean_sigma);
      flight.push_back(o.summary.flight_time_s);
      planning.push_back(o.summary.planning_time.mean);
      batch.decisions += o.summary.decisions;
      batch.fallback_decisions += o.summary.fallback_decisions;
      batch.void_audit_failures += o.summary.void_audit_failures;
      batch.close_approaches += o.close_approaches;
      min_dist = std::min(min_dist, o.min_converged_distance);
      for (const auto& pose : o.poses) batch.heatmap.add(pose);
      batch.trials.push_back(std::move(o.summary));
    }
    batch.rms = metric_stats(rms);
    batch.mean_sigma = metric_stats(sigma);
    batch.flight_time_s = metric_stats(flight);
    batch.planning_time_s = metric_stats(planning);
    if (std::isfinite(min_dist)) batch.min_converged_distance = min_dist;
    out.planners.push_back(std::move(batch));
  }
  return out;
}

}  // namespace lava
