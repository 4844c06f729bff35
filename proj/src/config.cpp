#include "lora/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "lora/errors.hpp"
#include "lora/units.hpp"

namespace lora {

using nlohmann::json;

namespace {

void check_keys(const json& node, const std::set<std::string>& allowed,
                const std::string& context) {
    for (const auto& item : node.items()) {
        if (!allowed.contains(item.key())) {
            fail(errkind::invalid_config,
                 "unknown key '" + item.key() + "' in " + context);
        }
    }
}

double number_at(const json& node, const char* key, double fallback) {
    if (!node.contains(key)) {
        return fallback;
    }
    if (!node[key].is_number()) {
        fail(errkind::invalid_config, std::string("'") + key + "' must be a number");
    }
    return node[key].get<double>();
}

void apply_channel(const json& node, ScenarioConfig& config) {
    check_keys(node,
               {"carrier_frequency_hz", "path_loss_exponent", "noise_figure_db",
                "bandwidth_hz", "noise_power_dbm", "sir_threshold_db"},
               "channel");
    const ChannelModel& base = config.channel;
    const double carrier = number_at(node, "carrier_frequency_hz", base.carrier_frequency_hz);
    const double eta = number_at(node, "path_loss_exponent", base.path_loss_exponent);
    const double nf = number_at(node, "noise_figure_db", base.noise_figure_db);
    const double bandwidth = number_at(node, "bandwidth_hz", base.bandwidth_hz);
    // Absent noise means "derive from NF and bandwidth" once either changed;
    // otherwise the preset's supplied floor stands.
    double noise = base.noise_power_dbm;
    if (node.contains("noise_power_dbm")) {
        noise = number_at(node, "noise_power_dbm", noise);
    } else if (node.contains("noise_figure_db") || node.contains("bandwidth_hz")) {
        noise = std::nan("");
    }
    const double sir = number_at(node, "sir_threshold_db", base.sir_threshold_db);
    config.channel = make_channel_model(carrier, eta, nf, bandwidth, noise, sir);
}

void apply_profiles(const json& node, ScenarioConfig& config) {
    if (!node.is_array() || node.size() != 6) {
        fail(errkind::invalid_config, "'profiles' must be an array of six rings");
    }
    SfTable table = config.profiles;
    for (std::size_t i = 0; i < 6; ++i) {
        const json& row = node[i];
        check_keys(row,
                   {"ring", "sf", "time_on_air_s", "snr_threshold_db", "sensitivity_dbm",
                    "bitrate_kbps"},
                   "profiles[" + std::to_string(i) + "]");
        SpreadingFactorProfile& profile = table[i];
        profile.ring_index = static_cast<int>(number_at(row, "ring", profile.ring_index));
        profile.sf = static_cast<int>(number_at(row, "sf", profile.sf));
        profile.time_on_air_s = number_at(row, "time_on_air_s", profile.time_on_air_s);
        profile.snr_threshold_db = number_at(row, "snr_threshold_db", profile.snr_threshold_db);
        profile.sensitivity_dbm = number_at(row, "sensitivity_dbm", profile.sensitivity_dbm);
        profile.bitrate_kbps = number_at(row, "bitrate_kbps", profile.bitrate_kbps);
    }
    config.profiles = table;
}

void apply_traffic(const json& node, ScenarioConfig& config) {
    check_keys(node, {"message_period_s", "duty_cycles"}, "traffic");
    const double period = number_at(node, "message_period_s", config.traffic.message_period_s);
    if (node.contains("duty_cycles")) {
        const json& cycles = node["duty_cycles"];
        if (!cycles.is_array() || cycles.size() != 6) {
            fail(errkind::invalid_config, "'duty_cycles' must hold six probabilities");
        }
        TrafficProfile traffic;
        traffic.message_period_s = period;
        for (std::size_t i = 0; i < 6; ++i) {
            if (!cycles[i].is_number()) {
                fail(errkind::invalid_config, "'duty_cycles' must hold numbers");
            }
            traffic.duty_cycles[i] = cycles[i].get<double>();
        }
        validate_traffic(traffic);
        config.traffic = traffic;
    } else {
        config.traffic = make_traffic_profile(period, config.profiles);
    }
}

void apply_limits(const json& node, ScenarioConfig& config) {
    check_keys(node, {"min_power_dbm", "max_power_dbm", "step_db"}, "limits");
    RadioLimits limits = config.limits;
    limits.min_power_dbm = number_at(node, "min_power_dbm", limits.min_power_dbm);
    limits.max_power_dbm = number_at(node, "max_power_dbm", limits.max_power_dbm);
    limits.step_db = number_at(node, "step_db", limits.step_db);
    validate_limits(limits);
    config.limits = limits;
}

void apply_targets(const json& node, ScenarioConfig& config) {
    check_keys(node, {"total_outage", "disconnection"}, "targets");
    config.total_target = number_at(node, "total_outage", config.total_target);
    if (node.contains("disconnection")) {
        config.disconnection_target = number_at(node, "disconnection", 0.0);
        config.geometry_mode = GeometryMode::GeometryFirst;
    }
}

void apply_geometry(const json& node, ScenarioConfig& config) {
    check_keys(node, {"mode", "radius_m"}, "geometry");
    if (node.contains("mode")) {
        const std::string mode = node["mode"].get<std::string>();
        if (mode == "radius-first") {
            config.geometry_mode = GeometryMode::RadiusFirst;
        } else if (mode == "geometry-first") {
            config.geometry_mode = GeometryMode::GeometryFirst;
        } else {
            fail(errkind::invalid_config, "unknown geometry mode '" + mode + "'");
        }
    }
    config.radius_m = number_at(node, "radius_m", config.radius_m);
}

}  // namespace

ScenarioConfig preset_config(const std::string& name) {
    if (name != "eu868-suburban") {
        fail(errkind::invalid_config, "unknown preset '" + name + "'");
    }
    ScenarioConfig config;
    config.preset = name;
    config.profiles = eu868_suburban_profiles();
    config.channel = eu868_suburban_channel();
    config.traffic = eu868_suburban_traffic();
    config.limits = eu868_suburban_limits();
    config.total_target = 0.01;
    config.disconnection_target = 0.0;
    config.geometry_mode = GeometryMode::RadiusFirst;
    config.radius_m = 1200.0;
    config.policy = PowerPolicy{PowerMode::AllocatedContinuous, 0.0};
    config.rounding = Rounding::Floor;
    config.trials = 200000;
    config.seed = 1;
    return config;
}

ScenarioConfig config_from_json(const json& doc) {
    if (!doc.is_object()) {
        fail(errkind::invalid_config, "config root must be a JSON object");
    }
    check_keys(doc,
               {"preset", "channel", "profiles", "traffic", "limits", "targets", "geometry",
                "policy", "rounding", "trials", "seed"},
               "config");
    ScenarioConfig config =
        preset_config(doc.value("preset", std::string("eu868-suburban")));
    if (doc.contains("profiles")) {
        apply_profiles(doc["profiles"], config);
        // Preset duty cycles follow the table; recompute before any explicit
        // traffic section overrides them again.
        config.traffic = make_traffic_profile(config.traffic.message_period_s, config.profiles);
    }
    if (doc.contains("channel")) {
        apply_channel(doc["channel"], config);
    }
    if (doc.contains("traffic")) {
        apply_traffic(doc["traffic"], config);
    }
    if (doc.contains("limits")) {
        apply_limits(doc["limits"], config);
    }
    if (doc.contains("targets")) {
        apply_targets(doc["targets"], config);
    }
    if (doc.contains("geometry")) {
        apply_geometry(doc["geometry"], config);
    }
    if (doc.contains("policy")) {
        config.policy = parse_power_policy(doc["policy"].get<std::string>(), config.limits);
    }
    if (doc.contains("rounding")) {
        config.rounding = parse_rounding(doc["rounding"].get<std::string>());
    }
    if (doc.contains("trials")) {
        if (!doc["trials"].is_number_integer() || doc["trials"].get<long>() <= 0) {
            fail(errkind::invalid_config, "'trials' must be a positive integer");
        }
        config.trials = doc["trials"].get<long>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
            fail(errkind::invalid_config, "'seed' must be an integer");
        }
        config.seed = doc["seed"].get<uint64_t>();
    }

    validate_profiles(config.profiles, config.channel.noise_power_dbm);
    validate_channel(config.channel);
    validate_traffic(config.traffic);
    validate_limits(config.limits);
    if (config.geometry_mode == GeometryMode::GeometryFirst &&
        !(config.disconnection_target > 0.0)) {
        fail(errkind::invalid_config,
             "geometry-first mode needs targets.disconnection");
    }
    if (config.geometry_mode == GeometryMode::RadiusFirst && !(config.radius_m > 0.0)) {
        fail(errkind::invalid_config, "radius-first mode needs geometry.radius_m");
    }
    return config;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream input(path);
    if (!input) {
        fail(errkind::invalid_config, "cannot open config file '" + path + "'");
    }
    json doc;
    try {
        input >> doc;
    } catch (const json::exception& e) {
        fail(errkind::invalid_config, "cannot parse '" + path + "': " + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const ScenarioConfig& config) {
    json doc;
    doc["preset"] = config.preset;
    doc["channel"] = {
        {"carrier_frequency_hz", config.channel.carrier_frequency_hz},
        {"path_loss_exponent", config.channel.path_loss_exponent},
        {"noise_figure_db", config.channel.noise_figure_db},
        {"bandwidth_hz", config.channel.bandwidth_hz},
        {"noise_power_dbm", config.channel.noise_power_dbm},
        {"sir_threshold_db", config.channel.sir_threshold_db},
    };
    doc["profiles"] = json::array();
    for (const auto& profile : config.profiles) {
        doc["profiles"].push_back({
            {"ring", profile.ring_index},
            {"sf", profile.sf},
            {"time_on_air_s", profile.time_on_air_s},
            {"snr_threshold_db", profile.snr_threshold_db},
            {"sensitivity_dbm", profile.sensitivity_dbm},
            {"bitrate_kbps", profile.bitrate_kbps},
        });
    }
    doc["traffic"] = {
        {"message_period_s", config.traffic.message_period_s},
        {"duty_cycles", config.traffic.duty_cycles},
    };
    doc["limits"] = {
        {"min_power_dbm", config.limits.min_power_dbm},
        {"max_power_dbm", config.limits.max_power_dbm},
        {"step_db", config.limits.step_db},
    };
    if (config.geometry_mode == GeometryMode::GeometryFirst) {
        doc["targets"] = {{"total_outage", config.total_target},
                          {"disconnection", config.disconnection_target}};
        doc["geometry"] = {{"mode", "geometry-first"}};
    } else {
        doc["targets"] = {{"total_outage", config.total_target}};
        doc["geometry"] = {{"mode", "radius-first"}, {"radius_m", config.radius_m}};
    }
    doc["policy"] = to_string(config.policy);
    doc["rounding"] = to_string(config.rounding);
    doc["trials"] = config.trials;
    doc["seed"] = config.seed;
    return doc;
}

CellPlan build_plan(const ScenarioConfig& config) {
    const PlanInputs inputs{config.channel, config.profiles, config.traffic, config.limits};
    if (config.geometry_mode == GeometryMode::GeometryFirst) {
        const OutageTargets targets{config.total_target, config.disconnection_target};
        return plan_geometry_first(targets, inputs, config.rounding, config.policy);
    }
    return plan_radius_first(config.radius_m, config.total_target, inputs, config.rounding,
                             config.policy);
}

}  // namespace lora
