#include "lava/lava.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "lava/harness.hpp"
#include "lava/io.hpp"

struct lava_scenario {
  lava::ScenarioConfig cfg;
};

struct lava_mission {
  lava::MissionRecord record;
  lava::ScenarioConfig cfg;
};

struct lava_montecarlo {
  lava::McSummary summary;
  lava::ScenarioConfig cfg;
};

struct lava_bench {
  lava::BenchResult result;
};

namespace {

thread_local std::string g_last_error;

lava_status fail(lava_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

/// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
lava_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const lava::ConfigError& e) {
    return fail(LAVA_ERROR_CONFIG, e.what());
  } catch (const lava::IoError& e) {
    return fail(LAVA_ERROR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LAVA_ERROR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LAVA_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LAVA_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(LAVA_ERROR_INTERNAL, "unknown error");
  }
}

lava::PlannerKind to_kind(lava_planner p) {
  switch (p) {
    case LAVA_PLANNER_LAVAPILOT: return lava::PlannerKind::LavaPilot;
    case LAVA_PLANNER_RENYI: return lava::PlannerKind::Renyi;
    case LAVA_PLANNER_SHANNON: return lava::PlannerKind::Shannon;
  }
  throw std::invalid_argument("unknown planner id");
}

lava_planner from_kind(lava::PlannerKind k) {
  switch (k) {
    case lava::PlannerKind::LavaPilot: return LAVA_PLANNER_LAVAPILOT;
    case lava::PlannerKind::Renyi: return LAVA_PLANNER_RENYI;
    case lava::PlannerKind::Shannon: return LAVA_PLANNER_SHANNON;
  }
  return LAVA_PLANNER_LAVAPILOT;
}

lava::ExportFormat to_format(unsigned bits) {
  if ((bits & (LAVA_FORMAT_CSV | LAVA_FORMAT_JSON)) == 0) throw std::invalid_argument("no output format selected");
  return {(bits & LAVA_FORMAT_CSV) != 0, (bits & LAVA_FORMAT_JSON) != 0};
}

#define LAVA_REQUIRE(cond, msg) \
  if (!(cond)) return fail(LAVA_ERROR_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* lava_last_error(void) { return g_last_error.c_str(); }

const char* lava_version(void) { return "1.0.0"; }

lava_status lava_scenario_create_default(lava_scenario** out) {
  LAVA_REQUIRE(out, "out must not be null");
  return guarded([&] {
    *out = new lava_scenario{};
    return LAVA_OK;
  });
}

lava_status lava_scenario_load_file(const char* path, lava_scenario** out) {
  LAVA_REQUIRE(path && out, "path and out must not be null");
  return guarded([&] {
    *out = new lava_scenario{lava::load_scenario(path)};
    return LAVA_OK;
  });
}

lava_status lava_scenario_load_json(const char* json_text, lava_scenario** out) {
  LAVA_REQUIRE(json_text && out, "json_text and out must not be null");
  return guarded([&] {
    *out = new lava_scenario{lava::parse_scenario(json_text)};
    return LAVA_OK;
  });
}

void lava_scenario_destroy(lava_scenario* scenario) { delete scenario; }

lava_status lava_scenario_set_planner(lava_scenario* scenario, lava_planner planner) {
  LAVA_REQUIRE(scenario, "scenario must not be null");
  return guarded([&] {
    scenario->cfg.planner.kind = to_kind(planner);
    return LAVA_OK;
  });
}

lava_status lava_scenario_set_void(lava_scenario* scenario, int enabled) {
  LAVA_REQUIRE(scenario, "scenario must not be null");
  scenario->cfg.planner.void_enabled = enabled != 0;
  return LAVA_OK;
}

lava_status lava_scenario_set_seed(lava_scenario* scenario, uint64_t seed) {
  LAVA_REQUIRE(scenario, "scenario must not be null");
  scenario->cfg.seed = seed;
  return LAVA_OK;
}

lava_status lava_parse_planner(const char* name, lava_planner* out) {
  LAVA_REQUIRE(name && out, "name and out must not be null");
  const auto kind = lava::parse_planner_kind(name);
  if (!kind) return fail(LAVA_ERROR_CONFIG, std::string("unknown planner `") + name + "`");
  *out = from_kind(*kind);
  return LAVA_OK;
}

lava_status lava_scenario_to_json(const lava_scenario* scenario, char* buffer, size_t capacity,
                                  size_t* required) {
  LAVA_REQUIRE(scenario, "scenario must not be null");
  return guarded([&] {
    const std::string text = lava::scenario_to_json(scenario->cfg);
    if (required) *required = text.size() + 1;
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
    return LAVA_OK;
  });
}

lava_status lava_mission_run(const lava_scenario* scenario, lava_mission** out) {
  LAVA_REQUIRE(scenario && out, "scenario and out must not be null");
  return guarded([&] {
    *out = new lava_mission{lava::run_mission(scenario->cfg), scenario->cfg};
    return LAVA_OK;
  });
}

void lava_mission_destroy(lava_mission* mission) { delete mission; }

size_t lava_mission_step_count(const lava_mission* m) { return m ? m->record.rows.size() : 0; }
size_t lava_mission_tag_count(const lava_mission* m) { return m ? m->record.summary.tags.size() : 0; }

size_t lava_mission_localized_count(const lava_mission* m) {
  if (!m) return 0;
  size_t n = 0;
  for (const auto& t : m->record.summary.tags) n += t.localized ? 1 : 0;
  return n;
}

double lava_mission_flight_time(const lava_mission* m) { return m ? m->record.summary.flight_time_s : 0.0; }
double lava_mission_rms(const lava_mission* m) { return m ? m->record.summary.rms : 0.0; }
size_t lava_mission_decision_count(const lava_mission* m) { return m ? m->record.summary.decisions : 0; }
size_t lava_mission_void_audit_failures(const lava_mission* m) {
  return m ? m->record.summary.void_audit_failures : 0;
}

lava_status lava_mission_export(const lava_mission* mission, const char* dir, unsigned formats) {
  LAVA_REQUIRE(mission && dir, "mission and dir must not be null");
  return guarded([&] {
    lava::export_mission(mission->record, mission->cfg, dir, to_format(formats));
    return LAVA_OK;
  });
}

lava_status lava_montecarlo_run(const lava_scenario* scenario, size_t trials, size_t parallelism,
                                const lava_planner* planners, size_t planner_count, lava_montecarlo** out) {
  LAVA_REQUIRE(scenario && out, "scenario and out must not be null");
  LAVA_REQUIRE(planner_count == 0 || planners, "planners must not be null when planner_count > 0");
  return guarded([&] {
    std::vector<lava::PlannerSpec> specs;
    for (size_t i = 0; i < planner_count; ++i) {
      lava::PlannerSpec s = scenario->cfg.planner;
      s.kind = to_kind(planners[i]);
      specs.push_back(s);
    }
    *out = new lava_montecarlo{lava::run_montecarlo(scenario->cfg, trials, parallelism, specs), scenario->cfg};
    return LAVA_OK;
  });
}

void lava_montecarlo_destroy(lava_montecarlo* batch) { delete batch; }

size_t lava_montecarlo_planner_count(const lava_montecarlo* b) { return b ? b->summary.planners.size() : 0; }

double lava_montecarlo_mean_rms(const lava_montecarlo* b, size_t i) {
  return b && i < b->summary.planners.size() ? b->summary.planners[i].rms.mean : 0.0;
}

double lava_montecarlo_mean_flight_time(const lava_montecarlo* b, size_t i) {
  return b && i < b->summary.planners.size() ? b->summary.planners[i].flight_time_s.mean : 0.0;
}

size_t lava_montecarlo_void_audit_failures(const lava_montecarlo* b) {
  if (!b) return 0;
  size_t n = 0;
  for (const auto& p : b->summary.planners) n += p.void_audit_failures;
  return n;
}

lava_status lava_montecarlo_export(const lava_montecarlo* batch, const char* dir, unsigned formats) {
  LAVA_REQUIRE(batch && dir, "batch and dir must not be null");
  return guarded([&] {
    lava::export_montecarlo(batch->summary, batch->cfg, dir, to_format(formats));
    return LAVA_OK;
  });
}

lava_status lava_bench_run(size_t particles, int tags, int actions, int horizon, size_t repetitions, uint64_t seed,
                           lava_bench** out) {
  LAVA_REQUIRE(out, "out must not be null");
  return guarded([&] {
    lava::BenchConfig cfg;
    cfg.particles = particles;
    cfg.tags = tags;
    cfg.actions = actions;
    cfg.horizon = horizon;
    cfg.repetitions = repetitions;
    cfg.seed = seed;
    *out = new lava_bench{lava::bench_planners(cfg)};
    return LAVA_OK;
  });
}

void lava_bench_destroy(lava_bench* bench) { delete bench; }

size_t lava_bench_row_count(const lava_bench* b) { return b ? b->result.rows.size() : 0; }

lava_status lava_bench_row(const lava_bench* bench, size_t row, lava_planner* planner, double* mean_s,
                           double* min_s, double* max_s, double* median_s, uint64_t* likelihood_calls) {
  LAVA_REQUIRE(bench, "bench must not be null");
  LAVA_REQUIRE(row < bench->result.rows.size(), "row index out of range");
  const auto& r = bench->result.rows[row];
  if (planner) *planner = from_kind(r.kind);
  if (mean_s) *mean_s = r.stats.mean;
  if (min_s) *min_s = r.stats.min;
  if (max_s) *max_s = r.stats.max;
  if (median_s) *median_s = r.stats.median;
  if (likelihood_calls) *likelihood_calls = r.likelihood_calls;
  return LAVA_OK;
}

lava_status lava_bench_export(const lava_bench* bench, const char* dir, unsigned formats) {
  LAVA_REQUIRE(bench && dir, "bench and dir must not be null");
  return guarded([&] {
    lava::export_bench(bench->result, dir, to_format(formats));
    return LAVA_OK;
  });
}

}  // extern "C"
