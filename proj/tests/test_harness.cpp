#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "lava/harness.hpp"
#include "lava/io.hpp"

using namespace lava;

namespace {

ScenarioConfig small_scenario(std::uint64_t seed = 5) {
  ScenarioConfig cfg;
  cfg.area = Area{0.0, 400.0, 0.0, 400.0};
  cfg.tag_count = 2;
  cfg.tag_positions = {{80.0, 300.0}, {320.0, 90.0}};
  cfg.stationary_tags = true;
  cfg.tracker.particle_count = 1500;
  cfg.max_flight_time = 400.0;
  cfg.seed = seed;
  return cfg;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lava_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("compute_rms reference values") {
  const std::vector<Vec3> e{{1, 2, 3}, {4, 5, 6}};
  CHECK(compute_rms(e, e) == 0.0);
  const std::vector<Vec3> one_est{{3, 4, 0}};
  const std::vector<Vec3> one_truth{{0, 0, 0}};
  CHECK(compute_rms(one_est, one_truth) == doctest::Approx(5.0));
  const std::vector<Vec3> two_est{{3, 4, 0}, {7, 7, 7}};
  const std::vector<Vec3> two_truth{{0, 0, 0}, {7, 7, 7}};
  CHECK(compute_rms(two_est, two_truth) == doctest::Approx(std::sqrt(12.5)));
  CHECK_THROWS(compute_rms(two_est, one_truth));
}

TEST_CASE("scenario validation") {
  ScenarioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tag_count = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.tag_positions = {{10.0, 10.0}};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.tag_count = 1;
  cfg.tag_positions = {{5000.0, 10.0}};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.rf.path_loss_n = 9.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  CHECK(cfg.start_position() == Vec2{500.0, 500.0});
  CHECK(cfg.step_budget() == 3000);
}

TEST_CASE("zero flight time gives an empty mission") {
  auto cfg = small_scenario();
  cfg.max_flight_time = 0.0;
  const auto rec = run_mission(cfg);
  CHECK(rec.rows.empty());
  CHECK(rec.summary.flight_time_s == 0.0);
  CHECK_FALSE(rec.summary.all_localized);
  for (const auto& t : rec.summary.tags) CHECK_FALSE(t.localized);

  std::ostringstream csv;
  write_mission_csv(rec, csv);
  CHECK(count_lines(csv.str()) == 1);
  CHECK(csv.str().rfind("k,uav_x,uav_y,uav_z,uav_heading,tag1_rssi,", 0) == 0);
}

TEST_CASE("single far tag is localized end to end") {
  ScenarioConfig cfg = small_scenario();
  cfg.tag_count = 1;
  cfg.tag_positions = {{350.0, 350.0}};
  cfg.uav_start = Vec2{50.0, 50.0};
  cfg.max_flight_time = 1500.0;
  const auto rec = run_mission(cfg);
  REQUIRE(rec.summary.all_localized);
  CHECK(rec.summary.tags[0].localized);
  CHECK(rec.summary.tags[0].sigma < cfg.tracker.sigma_min);
  CHECK(rec.summary.flight_time_s == rec.rows.size() * cfg.step_period());
}

TEST_CASE("mission invariants and determinism") {
  for (auto kind : {PlannerKind::LavaPilot, PlannerKind::Renyi}) {
    auto cfg = small_scenario(11);
    cfg.planner.kind = kind;
    cfg.stationary_tags = false;
    const auto a = run_mission(cfg);
    const auto b = run_mission(cfg);

    // Planning time is wall-clock; every simulated quantity must repeat exactly.
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].uav == b.rows[i].uav);
      CHECK(a.rows[i].void_prob == b.rows[i].void_prob);
      for (std::size_t t = 0; t < a.rows[i].tags.size(); ++t) {
        CHECK(a.rows[i].tags[t].rssi_dbm == b.rows[i].tags[t].rssi_dbm);
        CHECK(a.rows[i].tags[t].estimate == b.rows[i].tags[t].estimate);
      }
    }
    CHECK(a.summary.tags == b.summary.tags);
    CHECK(a.summary.flight_time_s == b.summary.flight_time_s);

    long prev_k = 0;
    std::vector<bool> latched(cfg.tag_count, false);
    for (const auto& row : a.rows) {
      CHECK(row.k == prev_k + 1);
      prev_k = row.k;
      CHECK(cfg.area.contains(row.uav.position));
      CHECK(row.uav.position.z == cfg.kinematics.altitude);
      CHECK(row.uav.heading >= 0.0);
      CHECK(row.uav.heading < 2.0 * std::numbers::pi);
      for (std::size_t t = 0; t < row.tags.size(); ++t) {
        CHECK(cfg.area.contains(row.tags[t].truth));
        if (latched[t]) CHECK(row.tags[t].localized);
        latched[t] = row.tags[t].localized;
      }
    }
    if (a.summary.all_localized) {
      CHECK(a.summary.flight_time_s == a.rows.back().k * cfg.step_period());
      bool all_before = true;
      for (std::size_t i = 0; i + 1 < a.rows.size(); ++i) {
        bool all = true;
        for (const auto& t : a.rows[i].tags) all = all && t.localized;
        all_before = all_before && !all;
      }
      CHECK(all_before);
    } else {
      CHECK(a.summary.flight_time_s == cfg.max_flight_time);
    }
    CHECK(a.summary.void_audit_failures == 0);
    for (const auto& d : a.decisions) {
      if (!d.fallback) CHECK(d.void_prob >= cfg.void_cfg.b_min);
    }
  }
}

TEST_CASE("summary RMS agrees with the per-tag records") {
  const auto rec = run_mission(small_scenario(21));
  std::vector<Vec3> est, truth;
  for (const auto& t : rec.summary.tags) {
    est.push_back(t.estimate);
    truth.push_back(t.truth);
    CHECK(t.error == doctest::Approx(distance(t.estimate, t.truth)));
  }
  CHECK(rec.summary.rms == doctest::Approx(compute_rms(est, truth)));
}

TEST_CASE("heat map bins") {
  HeatMap map(Area{0.0, 100.0, 0.0, 50.0}, 10.0);
  CHECK(map.nx == 10);
  CHECK(map.ny == 5);
  map.add({0.0, 0.0});
  map.add({100.0, 50.0});
  map.add({15.0, 25.0});
  CHECK(map.total() == 3);
  CHECK(map.counts[0] == 1);
  CHECK(map.counts[4 * 10 + 9] == 1);
  CHECK(map.counts[2 * 10 + 1] == 1);
}

TEST_CASE("Monte-Carlo aggregation and parallel independence") {
  auto cfg = small_scenario(3);
  cfg.max_flight_time = 120.0;
  const auto single = run_montecarlo(cfg, 1, 1);
  auto direct_cfg = cfg;
  direct_cfg.seed = trial_seed(cfg.seed, 0);
  const auto direct = run_mission(direct_cfg);
  REQUIRE(single.planners.size() == 1);
  CHECK(single.planners[0].rms.mean == direct.summary.rms);
  CHECK(single.planners[0].flight_time_s.median == direct.summary.flight_time_s);
  CHECK(single.planners[0].heatmap.total() == direct.rows.size());

  const std::vector<PlannerSpec> specs{{PlannerKind::LavaPilot, 0.5, true},
                                       {PlannerKind::Shannon, 0.5, true}};
  const auto seq = run_montecarlo(cfg, 3, 1, specs);
  const auto par = run_montecarlo(cfg, 3, 8, specs);
  CHECK(seq.planners[1].rms.mean == par.planners[1].rms.mean);
  CHECK(seq.planners[0].heatmap.counts == par.planners[0].heatmap.counts);
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t t = 0; t < 3; ++t) CHECK(seq.planners[p].trials[t].tags == par.planners[p].trials[t].tags);
  CHECK_THROWS_AS(run_montecarlo(cfg, 0, 1), ConfigError);
}

TEST_CASE("scenario JSON round trip and defaults") {
  auto cfg = small_scenario(99);
  cfg.rf.reflection = ReflectionMode::Fresnel;
  cfg.planner.kind = PlannerKind::Shannon;
  cfg.uav_start = Vec2{12.5, 7.25};
  cfg.tag_frequencies_mhz = {150.1, 151.9};
  const auto text = scenario_to_json(cfg);
  const auto back = parse_scenario(text);
  CHECK(scenario_to_json(back) == text);
  CHECK(back.tag_positions == cfg.tag_positions);
  CHECK(back.seed == 99);
  CHECK(back.planner.kind == PlannerKind::Shannon);

  const auto defaults = parse_scenario("{}");
  CHECK(scenario_to_json(defaults) == scenario_to_json(ScenarioConfig{}));
  CHECK_THROWS_AS(parse_scenario("{\"tags\": {\"count\": -1}}"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("{\"planner\": {\"kind\": \"greedy\"}}"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/lava.json"), IoError);
}

TEST_CASE("mission exports") {
  const auto cfg = small_scenario(8);
  const auto rec = run_mission(cfg);

  std::ostringstream csv;
  write_mission_csv(rec, csv);
  CHECK(count_lines(csv.str()) == rec.rows.size() + 1);

  const auto json = mission_json(rec, cfg);
  CHECK(mission_summary_from_json(json) == rec.summary);
  CHECK(json.find("\"schema_version\"") != std::string::npos);

  const auto dir = scratch_dir("export");
  export_mission(rec, cfg, dir, ExportFormat{true, true});
  CHECK(std::filesystem::exists(dir / "steps.csv"));
  CHECK(std::filesystem::exists(dir / "heatmap.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));

  const auto json_only = scratch_dir("export_json");
  export_mission(rec, cfg, json_only, parse_export_format("json"));
  CHECK_FALSE(std::filesystem::exists(json_only / "steps.csv"));
  CHECK(std::filesystem::exists(json_only / "summary.json"));
  CHECK_THROWS(parse_export_format("xml"));

  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(json_only);
}

TEST_CASE("export reports unwritable paths") {
  const auto rec = run_mission([] {
    auto c = small_scenario();
    c.max_flight_time = 0.0;
    return c;
  }());
  const auto blocker = scratch_dir("blocker");
  { std::ofstream(blocker.string()) << "x"; }
  CHECK_THROWS_AS(export_mission(rec, small_scenario(), blocker / "sub", ExportFormat{}), IoError);
  std::filesystem::remove_all(blocker);
}

TEST_CASE("bench shape") {
  BenchConfig bc;
  bc.particles = 300;
  bc.tags = 3;
  bc.repetitions = 10;
  const auto result = bench_planners(bc);
  REQUIRE(result.rows.size() == 3);
  CHECK(result.rows[0].kind == PlannerKind::LavaPilot);
  CHECK(result.rows[0].likelihood_calls == 0);
  CHECK(result.rows[1].likelihood_calls > 0);
  for (const auto& row : result.rows) {
    CHECK(row.samples_s.size() == 10);
    CHECK(row.stats.count == 10);
    CHECK(row.stats.min <= row.stats.median);
    CHECK(row.stats.median <= row.stats.max);
  }
  bc.repetitions = 5;
  CHECK_THROWS(bench_planners(bc));
}
