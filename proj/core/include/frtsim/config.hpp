#pragma once

#include <filesystem>
#include <string>

#include "frtsim/scenario.hpp"

namespace frtsim {

struct OutputPaths {
  std::string dir{"out"};
};

/// Full scenario tree plus where results go.
struct ScenarioConfig {
  Scenario scenario;
  OutputPaths output;
};

/// Built-in defaults; identical to the bundled "paper.scenario" preset.
ScenarioConfig default_config();

/// JSON text to config. Omitted keys keep their defaults, unknown keys and
/// invariant violations throw ConfigError naming the key. Whitespace-only
/// text yields default_config().
ScenarioConfig parse_config_text(const std::string& text);

/// Reads and parses a file. Throws ConfigError for a missing or unreadable file.
ScenarioConfig parse_config(const std::filesystem::path& path);

/// Complete JSON tree (every key present), stable key order.
std::string serialize_config(const ScenarioConfig& cfg);

/// Named preset ("paper"). Throws ConfigError for unknown names.
ScenarioConfig preset_config(const std::string& name);

/// Applies "dotted.key=value" (value parsed as JSON, bare words as strings)
/// on top of cfg and re-validates.
ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& assignment);

/// Library version string.
const char* version();

}  // namespace frtsim
