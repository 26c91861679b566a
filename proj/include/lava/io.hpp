#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "lava/harness.hpp"

namespace lava {

inline constexpr int kSchemaVersion = 1;

/// Parses a scenario document; absent keys keep their defaults. Throws ConfigError.
ScenarioConfig parse_scenario(std::string_view json_text);
/// Throws IoError if unreadable, ConfigError if malformed.
ScenarioConfig load_scenario(const std::filesystem::path& path);
/// Full echo of every setting, defaults included.
std::string scenario_to_json(const ScenarioConfig& cfg, int indent = 2);

struct ExportFormat {
  bool csv = true;
  bool json = true;
};

/// Accepts "csv", "json", or a comma-separated list of both.
ExportFormat parse_export_format(std::string_view text);

/// Per-step table. Column order is fixed; see README.
void write_mission_csv(const MissionRecord& record, std::ostream& out);
std::string mission_json(const MissionRecord& record, const ScenarioConfig& cfg, int indent = 2);
MissionSummary mission_summary_from_json(std::string_view json_text);
void write_heatmap_csv(const HeatMap& map, std::ostream& out);
std::string montecarlo_json(const McSummary& summary, const ScenarioConfig& cfg, int indent = 2);
std::string bench_json(const BenchResult& result, int indent = 2);
void write_bench_csv(const BenchResult& result, std::ostream& out);

/// Writes steps.csv, heatmap.csv and/or summary.json under `dir`. Throws IoError.
void export_mission(const MissionRecord& record, const ScenarioConfig& cfg,
                    const std::filesystem::path& dir, ExportFormat format);
/// Writes montecarlo.json and heatmap_<planner>.csv files under `dir`. Throws IoError.
void export_montecarlo(const McSummary& summary, const ScenarioConfig& cfg,
                       const std::filesystem::path& dir, ExportFormat format);
/// Writes bench.csv and/or bench.json under `dir`. Throws IoError.
void export_bench(const BenchResult& result, const std::filesystem::path& dir, ExportFormat format);

}  // namespace lava
