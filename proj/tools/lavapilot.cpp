// Command-line front end. Talks to the simulator only through lava.h.
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lava/lava.h"

namespace {

struct ScenarioDeleter {
  void operator()(lava_scenario* s) const { lava_scenario_destroy(s); }
};
struct MissionDeleter {
  void operator()(lava_mission* m) const { lava_mission_destroy(m); }
};
struct BatchDeleter {
  void operator()(lava_montecarlo* b) const { lava_montecarlo_destroy(b); }
};
struct BenchDeleter {
  void operator()(lava_bench* b) const { lava_bench_destroy(b); }
};

using ScenarioPtr = std::unique_ptr<lava_scenario, ScenarioDeleter>;

int report(lava_status status) {
  std::fprintf(stderr, "lavapilot: %s\n", lava_last_error());
  return static_cast<int>(status);
}

std::optional<unsigned> parse_formats(const std::string& text) {
  unsigned bits = 0;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token == "csv") {
      bits |= LAVA_FORMAT_CSV;
    } else if (token == "json") {
      bits |= LAVA_FORMAT_JSON;
    } else {
      return std::nullopt;
    }
  }
  if (bits == 0) return std::nullopt;
  return bits;
}

struct ScenarioOptions {
  std::string config;
  std::vector<std::string> planners;
  std::string void_mode;
  std::optional<std::uint64_t> seed;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o, bool many_planners) {
  cmd->add_option("--config", o.config, "Scenario JSON file (defaults used when omitted)");
  if (many_planners) {
    cmd->add_option("--planner", o.planners, "Planner(s): lavapilot, renyi, shannon")->delimiter(',');
  } else {
    cmd->add_option("--planner", o.planners, "Planner: lavapilot, renyi or shannon")->expected(1);
  }
  cmd->add_option("--void", o.void_mode, "Void constraint on|off")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--seed", o.seed, "Master seed");
}

/// Builds the scenario handle; returns a non-zero exit code on failure.
int build_scenario(const ScenarioOptions& o, ScenarioPtr& out, std::vector<lava_planner>& planners) {
  lava_scenario* raw = nullptr;
  lava_status st = o.config.empty() ? lava_scenario_create_default(&raw)
                                    : lava_scenario_load_file(o.config.c_str(), &raw);
  if (st != LAVA_OK) return report(st);
  out.reset(raw);
  for (const auto& name : o.planners) {
    lava_planner p;
    if ((st = lava_parse_planner(name.c_str(), &p)) != LAVA_OK) return report(st);
    planners.push_back(p);
  }
  if (planners.size() == 1 && (st = lava_scenario_set_planner(raw, planners[0])) != LAVA_OK) return report(st);
  if (!o.void_mode.empty() && (st = lava_scenario_set_void(raw, o.void_mode == "on")) != LAVA_OK)
    return report(st);
  if (o.seed && (st = lava_scenario_set_seed(raw, *o.seed)) != LAVA_OK) return report(st);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint RSSI tag tracking and void-constrained UAV planning simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lava_version());

  std::string out_dir;
  std::string format = "csv,json";

  ScenarioOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop mission");
  add_scenario_options(simulate, sim_opts, false);
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--format", format, "csv, json or csv,json");

  ScenarioOptions mc_opts;
  std::size_t trials = 20;
  std::size_t parallel = 1;
  auto* montecarlo = app.add_subcommand("montecarlo", "Run a Monte-Carlo batch on matched seeds");
  add_scenario_options(montecarlo, mc_opts, true);
  montecarlo->add_option("--trials", trials, "Trials per planner")->check(CLI::PositiveNumber);
  montecarlo->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
  montecarlo->add_option("--out", out_dir, "Output directory")->required();
  montecarlo->add_option("--format", format, "csv, json or csv,json");

  std::size_t particles = 10000;
  int tags = 10;
  int actions = 12;
  int horizon = 11;
  std::size_t reps = 20;
  std::uint64_t bench_seed = 7;
  auto* bench = app.add_subcommand("bench", "Time one planning decision per planner");
  bench->add_option("--particles", particles, "Particles per tag");
  bench->add_option("--tags", tags, "Number of tags");
  bench->add_option("--actions", actions, "Discrete heading count");
  bench->add_option("--horizon", horizon, "Look-ahead steps");
  bench->add_option("--reps", reps, "Repetitions (>= 10)");
  bench->add_option("--seed", bench_seed, "Snapshot seed");
  bench->add_option("--out", out_dir, "Output directory (table printed to stdout when omitted)");
  bench->add_option("--format", format, "csv, json or csv,json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(LAVA_ERROR_CONFIG);
  }

  const auto formats = parse_formats(format);
  if (!formats) {
    std::fprintf(stderr, "lavapilot: --format must be csv, json or csv,json\n");
    return LAVA_ERROR_CONFIG;
  }

  if (*simulate) {
    ScenarioPtr scenario;
    std::vector<lava_planner> planners;
    if (int rc = build_scenario(sim_opts, scenario, planners)) return rc;
    lava_mission* raw = nullptr;
    if (auto st = lava_mission_run(scenario.get(), &raw); st != LAVA_OK) return report(st);
    std::unique_ptr<lava_mission, MissionDeleter> mission(raw);
    if (auto st = lava_mission_export(raw, out_dir.c_str(), *formats); st != LAVA_OK) return report(st);
    std::printf("steps=%zu localized=%zu/%zu flight_time_s=%.1f rms_m=%.2f decisions=%zu\n",
                lava_mission_step_count(raw), lava_mission_localized_count(raw), lava_mission_tag_count(raw),
                lava_mission_flight_time(raw), lava_mission_rms(raw), lava_mission_decision_count(raw));
    if (const auto failures = lava_mission_void_audit_failures(raw); failures > 0) {
      std::fprintf(stderr, "lavapilot: void audit failed on %zu decision(s)\n", failures);
      return LAVA_ERROR_INVARIANT;
    }
    return 0;
  }

  if (*montecarlo) {
    ScenarioPtr scenario;
    std::vector<lava_planner> planners;
    if (int rc = build_scenario(mc_opts, scenario, planners)) return rc;
    lava_montecarlo* raw = nullptr;
    if (auto st = lava_montecarlo_run(scenario.get(), trials, parallel, planners.data(), planners.size(), &raw);
        st != LAVA_OK)
      return report(st);
    std::unique_ptr<lava_montecarlo, BatchDeleter> batch(raw);
    if (auto st = lava_montecarlo_export(raw, out_dir.c_str(), *formats); st != LAVA_OK) return report(st);
    for (size_t i = 0; i < lava_montecarlo_planner_count(raw); ++i) {
      std::printf("planner[%zu] mean_rms_m=%.2f mean_flight_time_s=%.1f\n", i, lava_montecarlo_mean_rms(raw, i),
                  lava_montecarlo_mean_flight_time(raw, i));
    }
    if (const auto failures = lava_montecarlo_void_audit_failures(raw); failures > 0) {
      std::fprintf(stderr, "lavapilot: void audit failed on %zu decision(s)\n", failures);
      return LAVA_ERROR_INVARIANT;
    }
    return 0;
  }

  lava_bench* raw = nullptr;
  if (auto st = lava_bench_run(particles, tags, actions, horizon, reps, bench_seed, &raw); st != LAVA_OK)
    return report(st);
  std::unique_ptr<lava_bench, BenchDeleter> result(raw);
  if (!out_dir.empty()) {
    if (auto st = lava_bench_export(raw, out_dir.c_str(), *formats); st != LAVA_OK) return report(st);
  }
  static const char* names[] = {"lavapilot", "renyi", "shannon"};
  std::printf("%-10s %12s %12s %12s %12s %14s\n", "planner", "mean_s", "min_s", "max_s", "median_s", "likelihoods");
  for (size_t i = 0; i < lava_bench_row_count(raw); ++i) {
    lava_planner p;
    double mean, mn, mx, med;
    uint64_t calls;
    lava_bench_row(raw, i, &p, &mean, &mn, &mx, &med, &calls);
    std::printf("%-10s %12.6f %12.6f %12.6f %12.6f %14llu\n", names[p], mean, mn, mx, med,
                static_cast<unsigned long long>(calls));
  }
  return 0;
}
