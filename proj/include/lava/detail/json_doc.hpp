#pragma once

#include <json.hpp>

#include "lava/harness.hpp"

namespace lava {

nlohmann::json scenario_document(const ScenarioConfig& cfg);

}  // namespace lava
