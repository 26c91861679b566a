#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "lava/harness.hpp"

namespace lava {

namespace {

constexpr Area kBenchArea{0.0, 1000.0, 0.0, 1000.0};

/// Unlocalized Gaussian particle clouds with uneven weights, one per tag.
std::vector<ObjectBelief> make_snapshot(const BenchConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> ux(kBenchArea.x_min, kBenchArea.x_max);
  std::uniform_real_distribution<double> uy(kBenchArea.y_min, kBenchArea.y_max);
  std::uniform_real_distribution<double> spread(60.0, 150.0);
  std::uniform_real_distribution<double> raw_weight(0.5, 1.5);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<ObjectBelief> beliefs;
  for (int j = 0; j < cfg.tags; ++j) {
    ObjectBelief b;
    b.tag_id = j + 1;
    const double cx = ux(rng);
    const double cy = uy(rng);
    const double s = spread(rng);
    b.particles.resize(cfg.particles);
    b.weights.resize(cfg.particles);
    double total = 0.0;
    for (std::size_t i = 0; i < cfg.particles; ++i) {
      b.particles[i] = kBenchArea.clamp(Vec3{cx + s * gauss(rng), cy + s * gauss(rng), 1.0});
      b.weights[i] = raw_weight(rng);
      total += b.weights[i];
    }
    for (auto& w : b.weights) w /= total;
    beliefs.push_back(std::move(b));
  }
  return beliefs;
}

}  // namespace

BenchResult bench_planners(const BenchConfig& cfg) {
  if (cfg.repetitions < 10) throw ConfigError("bench: repetitions must be >= 10");
  if (cfg.tags < 1 || cfg.particles < 1) throw ConfigError("bench: tags and particles must be >= 1");

  PlanningContext ctx;
  ctx.area = kBenchArea;
  ctx.void_cfg.horizon = cfg.horizon;
  ctx.void_cfg.action_count = cfg.actions;
  try {
    ctx.void_cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const PropagationConfig rf;

  BenchResult result;
  result.config = cfg;
  for (PlannerKind kind : {PlannerKind::LavaPilot, PlannerKind::Renyi, PlannerKind::Shannon}) {
    BenchRow row;
    row.kind = kind;
    result.rows.push_back(row);
  }

  std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);
  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    Rng rng = make_stream(cfg.seed, {stream::kBench, static_cast<std::uint64_t>(rep)});
    const auto beliefs = make_snapshot(cfg, rng);
    std::uniform_real_distribution<double> u(100.0, 900.0);
    const UavState uav{{u(rng), u(rng), ctx.kinematics.altitude}, heading(rng), 0.0};

    for (auto& row : result.rows) {
      PlannerSpec spec;
      spec.kind = row.kind;
      const auto calls_before = likelihood_call_count();
      const auto t0 = std::chrono::steady_clock::now();
      const auto action = plan(beliefs, uav, ctx, spec, rf);
      const auto t1 = std::chrono::steady_clock::now();
      row.likelihood_calls += likelihood_call_count() - calls_before;
      row.samples_s.push_back(std::chrono::duration<double>(t1 - t0).count());
      (void)action;
    }
  }
  for (auto& row : result.rows) row.stats = summarize(row.samples_s);
  return result;
}

}  // namespace lava
