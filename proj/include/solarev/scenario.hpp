#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "solarev/optimizer.hpp"

namespace solarev {

inline constexpr const char* kToolVersion = "0.1.0";

struct ParsedScenario {
    ScenarioConfig config;
    /// Key paths filled from defaults, e.g. "finance.discount_rate".
    std::vector<std::string> defaults_applied;
    std::vector<std::string> warnings;
};

/// Parses a JSON scenario strictly: unknown keys, missing required keys and
/// out-of-range values are InputErrors naming the key path. Relative data
/// paths resolve against `base_dir`.
ParsedScenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ParsedScenario parse_scenario(const std::filesystem::path& path);

/// Fully resolved JSON for a config; parse_scenario(emit_scenario(c)).config == c.
nlohmann::json emit_scenario(const ScenarioConfig& config);

/// Loads or synthesizes demand and capacity factors; gaps are filled and the
/// capacity factor is calibrated to the configured annual mean.
ScenarioData load_scenario_data(const ScenarioConfig& config);

struct RunManifest {
    std::string command;
    std::filesystem::path scenario_path;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::filesystem::path output_dir;
    std::string started_at;
    std::vector<std::string> arguments;
    std::vector<std::string> defaults_applied;
    std::vector<std::string> warnings;
    nlohmann::json resolved_config;
};

std::string utc_timestamp();

/// Writes `manifest.json` into the output directory, creating it if needed.
void write_manifest(const RunManifest& manifest);

}  // namespace solarev
