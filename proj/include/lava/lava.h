/*
 * C interface to the lava tracking-and-planning simulator.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a lava_status;
 * on failure lava_last_error() describes the problem for the calling thread.
 */
#ifndef LAVA_LAVA_H
#define LAVA_LAVA_H

#include <stddef.h>
#include <stdint.h>

#if defined(LAVA_BUILDING_LIBRARY)
#define LAVA_API __attribute__((visibility("default")))
#else
#define LAVA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum lava_status {
  LAVA_OK = 0,
  LAVA_ERROR_ARGUMENT = 1,
  LAVA_ERROR_CONFIG = 2,
  LAVA_ERROR_IO = 3,
  LAVA_ERROR_INVARIANT = 4,
  LAVA_ERROR_INTERNAL = 5
} lava_status;

typedef enum lava_planner {
  LAVA_PLANNER_LAVAPILOT = 0,
  LAVA_PLANNER_RENYI = 1,
  LAVA_PLANNER_SHANNON = 2
} lava_planner;

/* Output selection for the *_export calls; OR the bits together. */
#define LAVA_FORMAT_CSV 1u
#define LAVA_FORMAT_JSON 2u

typedef struct lava_scenario lava_scenario;
typedef struct lava_mission lava_mission;
typedef struct lava_montecarlo lava_montecarlo;
typedef struct lava_bench lava_bench;

LAVA_API const char* lava_last_error(void);
LAVA_API const char* lava_version(void);

/* ---- scenario ---------------------------------------------------------- */

LAVA_API lava_status lava_scenario_create_default(lava_scenario** out);
LAVA_API lava_status lava_scenario_load_file(const char* path, lava_scenario** out);
LAVA_API lava_status lava_scenario_load_json(const char* json_text, lava_scenario** out);
LAVA_API void lava_scenario_destroy(lava_scenario* scenario);

LAVA_API lava_status lava_scenario_set_planner(lava_scenario* scenario, lava_planner planner);
LAVA_API lava_status lava_scenario_set_void(lava_scenario* scenario, int enabled);
LAVA_API lava_status lava_scenario_set_seed(lava_scenario* scenario, uint64_t seed);
LAVA_API lava_status lava_parse_planner(const char* name, lava_planner* out);

/*
 * Copies the full JSON echo of the scenario into `buffer` (NUL-terminated,
 * truncated to `capacity`). `*required` receives the size needed including
 * the terminator. Passing buffer = NULL just queries the size.
 */
LAVA_API lava_status lava_scenario_to_json(const lava_scenario* scenario, char* buffer, size_t capacity,
                                           size_t* required);

/* ---- single mission ---------------------------------------------------- */

LAVA_API lava_status lava_mission_run(const lava_scenario* scenario, lava_mission** out);
LAVA_API void lava_mission_destroy(lava_mission* mission);

LAVA_API size_t lava_mission_step_count(const lava_mission* mission);
LAVA_API size_t lava_mission_tag_count(const lava_mission* mission);
LAVA_API size_t lava_mission_localized_count(const lava_mission* mission);
LAVA_API double lava_mission_flight_time(const lava_mission* mission);
LAVA_API double lava_mission_rms(const lava_mission* mission);
LAVA_API size_t lava_mission_decision_count(const lava_mission* mission);
LAVA_API size_t lava_mission_void_audit_failures(const lava_mission* mission);

/* Writes steps.csv + heatmap.csv (CSV) and summary.json (JSON) under `dir`. */
LAVA_API lava_status lava_mission_export(const lava_mission* mission, const char* dir, unsigned formats);

/* ---- Monte-Carlo batch ------------------------------------------------- */

/*
 * Runs `trials` missions for each of the `planner_count` planner kinds (all
 * with the scenario's void setting) on matched seeds. planner_count = 0 uses
 * the scenario's own planner.
 */
LAVA_API lava_status lava_montecarlo_run(const lava_scenario* scenario, size_t trials, size_t parallelism,
                                         const lava_planner* planners, size_t planner_count,
                                         lava_montecarlo** out);
LAVA_API void lava_montecarlo_destroy(lava_montecarlo* batch);

LAVA_API size_t lava_montecarlo_planner_count(const lava_montecarlo* batch);
LAVA_API double lava_montecarlo_mean_rms(const lava_montecarlo* batch, size_t planner_index);
LAVA_API double lava_montecarlo_mean_flight_time(const lava_montecarlo* batch, size_t planner_index);
LAVA_API size_t lava_montecarlo_void_audit_failures(const lava_montecarlo* batch);

/* Writes montecarlo.json, trials.csv and heatmap_<planner>_<void>.csv under `dir`. */
LAVA_API lava_status lava_montecarlo_export(const lava_montecarlo* batch, const char* dir, unsigned formats);

/* ---- planner timing benchmark ------------------------------------------ */

LAVA_API lava_status lava_bench_run(size_t particles, int tags, int actions, int horizon, size_t repetitions,
                                    uint64_t seed, lava_bench** out);
LAVA_API void lava_bench_destroy(lava_bench* bench);

LAVA_API size_t lava_bench_row_count(const lava_bench* bench);
/* Fills mean/min/max/median seconds and the likelihood-evaluation count of one planner row. */
LAVA_API lava_status lava_bench_row(const lava_bench* bench, size_t row, lava_planner* planner, double* mean_s,
                                    double* min_s, double* max_s, double* median_s, uint64_t* likelihood_calls);
LAVA_API lava_status lava_bench_export(const lava_bench* bench, const char* dir, unsigned formats);

#ifdef __cplusplus
}
#endif

#endif /* LAVA_LAVA_H */
