#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lora/planner.hpp"

namespace lora {

enum class GeometryMode { RadiusFirst, GeometryFirst };

// Fully resolved run description. Defaults come from the eu868-suburban
// preset; a config file or CLI flags override individual fields. Unknown
// JSON keys are rejected.
struct ScenarioConfig {
    std::string preset = "eu868-suburban";
    ChannelModel channel;
    SfTable profiles;
    TrafficProfile traffic;
    RadioLimits limits;

    double total_target = 0.0;
    double disconnection_target = 0.0;  // used in geometry-first mode
    GeometryMode geometry_mode = GeometryMode::RadiusFirst;
    double radius_m = 0.0;              // used in radius-first mode

    PowerPolicy policy;
    Rounding rounding = Rounding::Floor;
    long trials = 200000;
    uint64_t seed = 1;
};

ScenarioConfig preset_config(const std::string& name);

// Parses and validates a config JSON document over the preset defaults.
ScenarioConfig config_from_json(const nlohmann::json& doc);
ScenarioConfig load_config_file(const std::string& path);

// Resolved form; reloading it reproduces the same run byte for byte.
nlohmann::json config_to_json(const ScenarioConfig& config);

// Runs the planner entry selected by geometry_mode.
CellPlan build_plan(const ScenarioConfig& config);

}  // namespace lora
