// Flat JSON configuration for every planner parameter, defaults included.

#pragma once

#include <string>

#include "replan/pipeline.hpp"

namespace replan {

/// Parse a one-level JSON object of planner parameters. Missing keys keep
/// their defaults; unknown keys raise ConfigError. When `k_max` is absent
/// it derives from rho_min.
PlannerSettings parse_config(const std::string& json_text);
PlannerSettings load_config_file(const std::string& path);

/// Reference configuration: every known key with its current value,
/// deterministically ordered.
std::string config_to_json(const PlannerSettings& settings);
void save_config_file(const PlannerSettings& settings, const std::string& path);

}  // namespace replan
