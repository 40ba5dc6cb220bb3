#pragma once

#include "vine/environment.hpp"
#include "vine/session.hpp"
#include "vine/statics.hpp"
#include "vine/workspace.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace vine {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Environment variable naming a config file when --config is not given.
constexpr const char* kConfigEnvVar = "VINE_CONFIG";

/// All tunables, SI units throughout. Defaults are the fitted values.
struct Config {
    RobotParams robot;
    WrinkleModel wrinkle;
    FrictionModel friction;
    double max_lock_pressure = kDefaultMaxLockPressurePa;
    double growth_threshold = kGrowthThresholdPa;

    double initial_body_pressure = 0.0;
    double initial_lock_pressure = 0.0;
    double touch_tolerance = kDefaultTouchTolerance;
    double session_ds = 0.002;

    SweepSpec sweep;
    std::string environment = "free";  // preset name or path to an environment file

    void validate() const;
};

Config config_from_json(const json& j);
json to_json(const Config& config);
Config load_config(const std::string& path);

/// Explicit path, else $VINE_CONFIG, else built-in defaults.
Config resolve_config(const std::optional<std::string>& path);

json to_json(const Environment& env);
Environment environment_from_json(const json& j);

/// Preset name ("wall_gap", "horizontal_bar", "free") or path to a JSON file.
Environment load_environment(const std::string& name_or_path);

json to_json(const SweepSpec& spec);

std::shared_ptr<const SessionSettings> make_session_settings(const Config& config, Environment env);

}  // namespace vine
