#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lava/detail/json_doc.hpp"
#include "lava/io.hpp"

namespace lava {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& obj, const char* key, T& into) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) into = it->get<T>();
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  auto it = root.find(key);
  if (it == root.end() || it->is_null()) return empty;
  if (!it->is_object()) throw ConfigError(std::string("`") + key + "` must be an object");
  return *it;
}

Vec2 read_vec2(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

ScenarioConfig from_json(const json& root) {
  if (!root.is_object()) throw ConfigError("scenario document must be a JSON object");
  ScenarioConfig cfg;
  if (auto it = root.find("schema_version"); it != root.end() && it->get<int>() != kSchemaVersion)
    throw ConfigError("unsupported schema_version " + it->dump());

  const auto& area = section(root, "area");
  read(area, "x_min", cfg.area.x_min);
  read(area, "x_max", cfg.area.x_max);
  read(area, "y_min", cfg.area.y_min);
  read(area, "y_max", cfg.area.y_max);

  const auto& tags = section(root, "tags");
  read(tags, "count", cfg.tag_count);
  read(tags, "height_m", cfg.tag_height);
  read(tags, "stationary", cfg.stationary_tags);
  read(tags, "frequencies_mhz", cfg.tag_frequencies_mhz);
  if (auto it = tags.find("positions"); it != tags.end() && !it->is_null()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "random") throw ConfigError("tags.positions: expected \"random\" or a list");
    } else if (it->is_array()) {
      for (const auto& p : *it) cfg.tag_positions.push_back(read_vec2(p));
    } else {
      throw ConfigError("tags.positions: expected \"random\" or a list");
    }
  }

  const auto& uav = section(root, "uav");
  if (auto it = uav.find("start"); it != uav.end() && !it->is_null()) cfg.uav_start = read_vec2(*it);
  read(uav, "heading_rad", cfg.uav_start_heading);
  read(uav, "altitude_m", cfg.kinematics.altitude);
  read(uav, "v_max_mps", cfg.kinematics.v_max);
  read(uav, "accel_mps2", cfg.kinematics.accel);
  read(uav, "integration_dt_s", cfg.kinematics.integration_dt);

  read(root, "max_flight_time_s", cfg.max_flight_time);
  read(root, "seed", cfg.seed);

  const auto& vd = section(root, "void");
  read(vd, "r_min_m", cfg.void_cfg.r_min);
  read(vd, "b_min", cfg.void_cfg.b_min);
  read(vd, "horizon", cfg.void_cfg.horizon);
  read(vd, "action_count", cfg.void_cfg.action_count);
  read(root, "step_period_s", cfg.void_cfg.step_period);
  cfg.dynamics.step_period = cfg.void_cfg.step_period;

  const auto& tr = section(root, "tracker");
  read(tr, "particles", cfg.tracker.particle_count);
  read(tr, "resample_threshold", cfg.tracker.resample_threshold);
  read(tr, "sigma_min_m", cfg.tracker.sigma_min);

  const auto& pr = section(root, "propagation");
  read(pr, "p0_dbm", cfg.rf.p0_dbm);
  read(pr, "path_loss_n", cfg.rf.path_loss_n);
  read(pr, "wavelength_m", cfg.rf.wavelength_m);
  read(pr, "noise_var_db2", cfg.rf.noise_var_db2);
  const auto& refl = section(pr, "reflection");
  std::string mode = "constant";
  read(refl, "mode", mode);
  if (mode == "constant") {
    cfg.rf.reflection = ReflectionMode::Constant;
  } else if (mode == "fresnel") {
    cfg.rf.reflection = ReflectionMode::Fresnel;
  } else {
    throw ConfigError("propagation.reflection.mode must be \"constant\" or \"fresnel\"");
  }
  read(refl, "gamma", cfg.rf.gamma0);
  read(refl, "permittivity", cfg.rf.permittivity);
  const auto& ant = section(pr, "antenna");
  std::string kind = "yagi";
  read(ant, "kind", kind);
  if (kind == "yagi") {
    cfg.rf.antenna.kind = AntennaPattern::Kind::Yagi;
  } else if (kind == "table") {
    cfg.rf.antenna.kind = AntennaPattern::Kind::Table;
  } else {
    throw ConfigError("propagation.antenna.kind must be \"yagi\" or \"table\"");
  }
  read(ant, "gain_max_db", cfg.rf.antenna.gain_max_db);
  read(ant, "floor", cfg.rf.antenna.floor);
  read(ant, "gains_db", cfg.rf.antenna.table_db);

  const auto& dyn = section(root, "dynamics");
  if (auto it = dyn.find("process_noise_var_m2"); it != dyn.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 3) throw ConfigError("dynamics.process_noise_var_m2 must have 3 entries");
    cfg.dynamics.process_noise_var = {(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>()};
  }

  const auto& pl = section(root, "planner");
  if (auto it = pl.find("kind"); it != pl.end() && !it->is_null()) {
    const auto parsed = parse_planner_kind(it->get<std::string>());
    if (!parsed) throw ConfigError("planner.kind must be lavapilot, renyi or shannon");
    cfg.planner.kind = *parsed;
  }
  read(pl, "renyi_alpha", cfg.planner.renyi_alpha);
  read(pl, "void", cfg.planner.void_enabled);

  cfg.validate();
  return cfg;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text) {
  try {
    return from_json(json::parse(json_text));
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json scenario_document(const ScenarioConfig& cfg) {
  json positions;
  if (cfg.tag_positions.empty()) {
    positions = "random";
  } else {
    positions = json::array();
    for (const auto& p : cfg.tag_positions) positions.push_back({p.x, p.y});
  }
  const Vec2 start = cfg.start_position();
  json antenna = {{"kind", cfg.rf.antenna.kind == AntennaPattern::Kind::Yagi ? "yagi" : "table"},
                  {"gain_max_db", cfg.rf.antenna.gain_max_db},
                  {"floor", cfg.rf.antenna.floor},
                  {"gains_db", cfg.rf.antenna.table_db}};
  const auto& q = cfg.dynamics.process_noise_var;
  return json{
      {"schema_version", kSchemaVersion},
      {"area", {{"x_min", cfg.area.x_min}, {"x_max", cfg.area.x_max}, {"y_min", cfg.area.y_min}, {"y_max", cfg.area.y_max}}},
      {"tags",
       {{"count", cfg.tag_count},
        {"positions", positions},
        {"height_m", cfg.tag_height},
        {"stationary", cfg.stationary_tags},
        {"frequencies_mhz", cfg.tag_frequencies_mhz}}},
      {"uav",
       {{"start", {start.x, start.y}},
        {"heading_rad", cfg.uav_start_heading},
        {"altitude_m", cfg.kinematics.altitude},
        {"v_max_mps", cfg.kinematics.v_max},
        {"accel_mps2", cfg.kinematics.accel},
        {"integration_dt_s", cfg.kinematics.integration_dt}}},
      {"step_period_s", cfg.void_cfg.step_period},
      {"max_flight_time_s", cfg.max_flight_time},
      {"void",
       {{"r_min_m", cfg.void_cfg.r_min},
        {"b_min", cfg.void_cfg.b_min},
        {"horizon", cfg.void_cfg.horizon},
        {"action_count", cfg.void_cfg.action_count}}},
      {"tracker",
       {{"particles", cfg.tracker.particle_count},
        {"resample_threshold", cfg.tracker.resample_threshold},
        {"sigma_min_m", cfg.tracker.sigma_min}}},
      {"propagation",
       {{"p0_dbm", cfg.rf.p0_dbm},
        {"path_loss_n", cfg.rf.path_loss_n},
        {"wavelength_m", cfg.rf.wavelength_m},
        {"noise_var_db2", cfg.rf.noise_var_db2},
        {"reflection",
         {{"mode", cfg.rf.reflection == ReflectionMode::Constant ? "constant" : "fresnel"},
          {"gamma", cfg.rf.gamma0},
          {"permittivity", cfg.rf.permittivity}}},
        {"antenna", antenna}}},
      {"dynamics", {{"process_noise_var_m2", {q.x, q.y, q.z}}}},
      {"planner",
       {{"kind", std::string(to_string(cfg.planner.kind))},
        {"renyi_alpha", cfg.planner.renyi_alpha},
        {"void", cfg.planner.void_enabled}}},
      {"seed", cfg.seed},
  };
}

std::string scenario_to_json(const ScenarioConfig& cfg, int indent) {
  return scenario_document(cfg).dump(indent);
}

}  // namespace lava
