#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lava/detail/json_doc.hpp"
#include "lava/io.hpp"

namespace lava {

using nlohmann::json;

namespace {

/// Shortest round-trip decimal form.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json stats_json(const TimingStats& t) {
  return {{"count", t.count}, {"mean", t.mean}, {"min", t.min}, {"max", t.max}, {"median", t.median}};
}

json stats_json(const MetricStats& m) {
  return {{"mean", m.mean}, {"min", m.min}, {"max", m.max}, {"median", m.median}};
}

json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }

Vec3 vec_from(const json& j) { return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()}; }

json summary_json(const MissionSummary& s) {
  json tags = json::array();
  for (const auto& t : s.tags) {
    tags.push_back({{"tag_id", t.tag_id},
                    {"localized", t.localized},
                    {"localized_step", t.localized_step},
                    {"estimate", vec_json(t.estimate)},
                    {"truth", vec_json(t.truth)},
                    {"sigma", t.sigma},
                    {"error", t.error}});
  }
  return {{"tags", tags},
          {"rms", s.rms},
          {"mean_sigma", s.mean_sigma},
          {"flight_time_s", s.flight_time_s},
          {"all_localized", s.all_localized},
          {"planning_time_s", stats_json(s.planning_time)},
          {"decisions", s.decisions},
          {"fallback_decisions", s.fallback_decisions},
          {"void_audit_failures", s.void_audit_failures},
          {"divergence_events", s.divergence_events}};
}

json planner_json(const PlannerSpec& p) {
  return {{"kind", std::string(to_string(p.kind))}, {"renyi_alpha", p.renyi_alpha}, {"void", p.void_enabled}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

}  // namespace

ExportFormat parse_export_format(std::string_view text) {
  ExportFormat f{false, false};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (token == "csv") {
      f.csv = true;
    } else if (token == "json") {
      f.json = true;
    } else {
      throw ConfigError("unknown output format `" + std::string(token) + "` (expected csv or json)");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return f;
}

void write_mission_csv(const MissionRecord& record, std::ostream& out) {
  std::size_t tag_count = record.summary.tags.size();
  out << "k,uav_x,uav_y,uav_z,uav_heading";
  for (std::size_t t = 1; t <= tag_count; ++t) {
    const std::string p = "tag" + std::to_string(t) + "_";
    out << ',' << p << "rssi," << p << "est_x," << p << "est_y," << p << "est_z," << p << "sigma," << p
        << "localized";
  }
  out << ",planning_time_s,void_prob\n";
  for (const auto& row : record.rows) {
    out << row.k << ',' << num(row.uav.position.x) << ',' << num(row.uav.position.y) << ','
        << num(row.uav.position.z) << ',' << num(row.uav.heading);
    for (const auto& tag : row.tags) {
      out << ',' << num(tag.rssi_dbm) << ',' << num(tag.estimate.x) << ',' << num(tag.estimate.y) << ','
          << num(tag.estimate.z) << ',' << num(tag.sigma) << ',' << (tag.localized ? 1 : 0);
    }
    out << ',';
    if (row.planning_time_s) out << num(*row.planning_time_s);
    out << ',';
    if (row.void_prob) out << num(*row.void_prob);
    out << '\n';
  }
}

std::string mission_json(const MissionRecord& record, const ScenarioConfig& cfg, int indent) {
  json decisions = json::array();
  for (const auto& d : record.decisions) {
    decisions.push_back({{"k", d.k},
                         {"label", std::string(to_string(d.label))},
                         {"waypoint", {d.waypoint.x, d.waypoint.y}},
                         {"void_prob", d.void_prob},
                         {"planning_time_s", d.planning_time_s},
                         {"fallback", d.fallback},
                         {"satisfies_bound", d.satisfies_bound}});
  }
  json events = json::array();
  for (const auto& e : record.events) {
    events.push_back({{"k", e.k}, {"kind", std::string(to_string(e.kind))}, {"tag_id", e.tag_id}, {"value", e.value}});
  }
  const json doc = {{"schema_version", kSchemaVersion},
                    {"kind", "mission"},
                    {"config", scenario_document(cfg)},
                    {"steps", record.rows.size()},
                    {"summary", summary_json(record.summary)},
                    {"decisions", decisions},
                    {"events", events}};
  return doc.dump(indent);
}

MissionSummary mission_summary_from_json(std::string_view json_text) {
  try {
    const json doc = json::parse(json_text);
    const json& s = doc.contains("summary") ? doc.at("summary") : doc;
    MissionSummary out;
    for (const auto& t : s.at("tags")) {
      TagSummary ts;
      ts.tag_id = t.at("tag_id").get<int>();
      ts.localized = t.at("localized").get<bool>();
      ts.localized_step = t.at("localized_step").get<long>();
      ts.estimate = vec_from(t.at("estimate"));
      ts.truth = vec_from(t.at("truth"));
      ts.sigma = t.at("sigma").get<double>();
      ts.error = t.at("error").get<double>();
      out.tags.push_back(ts);
    }
    out.rms = s.at("rms").get<double>();
    out.mean_sigma = s.at("mean_sigma").get<double>();
    out.flight_time_s = s.at("flight_time_s").get<double>();
    out.all_localized = s.at("all_localized").get<bool>();
    const auto& pt = s.at("planning_time_s");
    out.planning_time = {pt.at("count").get<std::size_t>(), pt.at("mean").get<double>(), pt.at("min").get<double>(),
                         pt.at("max").get<double>(), pt.at("median").get<double>()};
    out.decisions = s.at("decisions").get<std::size_t>();
    out.fallback_decisions = s.at("fallback_decisions").get<std::size_t>();
    out.void_audit_failures = s.at("void_audit_failures").get<std::size_t>();
    out.divergence_events = s.at("divergence_events").get<std::size_t>();
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mission summary: ") + e.what());
  }
}

void write_heatmap_csv(const HeatMap& map, std::ostream& out) {
  for (int iy = 0; iy < map.ny; ++iy) {
    for (int ix = 0; ix < map.nx; ++ix) {
      if (ix) out << ',';
      out << map.counts[static_cast<std::size_t>(iy) * static_cast<std::size_t>(map.nx) + static_cast<std::size_t>(ix)];
    }
    out << '\n';
  }
}

std::string montecarlo_json(const McSummary& summary, const ScenarioConfig& cfg, int indent) {
  json planners = json::array();
  for (const auto& b : summary.planners) {
    json trials = json::array();
    for (const auto& t : b.trials) trials.push_back(summary_json(t));
    planners.push_back({{"planner", planner_json(b.planner)},
                        {"rms", stats_json(b.rms)},
                        {"mean_sigma", stats_json(b.mean_sigma)},
                        {"flight_time_s", stats_json(b.flight_time_s)},
                        {"planning_time_s", stats_json(b.planning_time_s)},
                        {"decisions", b.decisions},
                        {"fallback_decisions", b.fallback_decisions},
                        {"void_audit_failures", b.void_audit_failures},
                        {"close_approaches", b.close_approaches},
                        {"min_converged_distance",
                         b.min_converged_distance ? json(*b.min_converged_distance) : json(nullptr)},
                        {"heatmap",
                         {{"bin_size_m", b.heatmap.bin_size},
                          {"nx", b.heatmap.nx},
                          {"ny", b.heatmap.ny},
                          {"total", b.heatmap.total()}}},
                        {"trials", trials}});
  }
  const json doc = {{"schema_version", kSchemaVersion},
                    {"kind", "montecarlo"},
                    {"trials", summary.trials},
                    {"seed", summary.seed},
                    {"config", scenario_document(cfg)},
                    {"planners", planners}};
  return doc.dump(indent);
}

std::string bench_json(const BenchResult& result, int indent) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"planner", std::string(to_string(r.kind))},
                    {"planning_time_s", stats_json(r.stats)},
                    {"likelihood_calls", r.likelihood_calls}});
  }
  const auto& c = result.config;
  const json doc = {{"schema_version", kSchemaVersion},
                    {"kind", "bench"},
                    {"config",
                     {{"particles", c.particles},
                      {"tags", c.tags},
                      {"actions", c.actions},
                      {"horizon", c.horizon},
                      {"repetitions", c.repetitions},
                      {"seed", c.seed}}},
                    {"planners", rows}};
  return doc.dump(indent);
}

void write_bench_csv(const BenchResult& result, std::ostream& out) {
  out << "planner,mean_s,min_s,max_s,median_s,likelihood_calls\n";
  for (const auto& r : result.rows) {
    out << to_string(r.kind) << ',' << num(r.stats.mean) << ',' << num(r.stats.min) << ',' << num(r.stats.max)
        << ',' << num(r.stats.median) << ',' << r.likelihood_calls << '\n';
  }
}

void export_mission(const MissionRecord& record, const ScenarioConfig& cfg, const std::filesystem::path& dir,
                    ExportFormat format) {
  ensure_dir(dir);
  if (format.csv) {
    std::ostringstream steps;
    write_mission_csv(record, steps);
    write_file(dir / "steps.csv", steps.str());
    HeatMap map(cfg.area, 10.0);
    for (const auto& row : record.rows) map.add(row.uav.position.xy());
    std::ostringstream heat;
    write_heatmap_csv(map, heat);
    write_file(dir / "heatmap.csv", heat.str());
  }
  if (format.json) write_file(dir / "summary.json", mission_json(record, cfg) + "\n");
}

void export_montecarlo(const McSummary& summary, const ScenarioConfig& cfg, const std::filesystem::path& dir,
                       ExportFormat format) {
  ensure_dir(dir);
  if (format.csv) {
    for (const auto& b : summary.planners) {
      std::ostringstream heat;
      write_heatmap_csv(b.heatmap, heat);
      const std::string name = "heatmap_" + std::string(to_string(b.planner.kind)) +
                               (b.planner.void_enabled ? "_void" : "_novoid") + ".csv";
      write_file(dir / name, heat.str());
    }
    std::ostringstream trials;
    trials << "planner,void,trial,rms,mean_sigma,flight_time_s,all_localized,decisions,fallback_decisions,"
              "void_audit_failures,planning_time_mean_s\n";
    for (const auto& b : summary.planners) {
      for (std::size_t t = 0; t < b.trials.size(); ++t) {
        const auto& s = b.trials[t];
        trials << to_string(b.planner.kind) << ',' << (b.planner.void_enabled ? "on" : "off") << ',' << t << ','
               << num(s.rms) << ',' << num(s.mean_sigma) << ',' << num(s.flight_time_s) << ','
               << (s.all_localized ? 1 : 0) << ',' << s.decisions << ',' << s.fallback_decisions << ','
               << s.void_audit_failures << ',' << num(s.planning_time.mean) << '\n';
      }
    }
    write_file(dir / "trials.csv", trials.str());
  }
  if (format.json) write_file(dir / "montecarlo.json", montecarlo_json(summary, cfg) + "\n");
}

void export_bench(const BenchResult& result, const std::filesystem::path& dir, ExportFormat format) {
  ensure_dir(dir);
  if (format.csv) {
    std::ostringstream out;
    write_bench_csv(result, out);
    write_file(dir / "bench.csv", out.str());
  }
  if (format.json) write_file(dir / "bench.json", bench_json(result) + "\n");
}

}  // namespace lava
