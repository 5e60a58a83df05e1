#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "valvelab/plant.hpp"

namespace valvelab::plant {

/// "valve0" .. "valve7".
std::vector<std::string> preset_names();

/**
 * Built-in valve presets. valve0 is the nominal, well-behaved valve with twice
 * the motor gain of the others. valve1..valve7 draw a +/-20% spread on
 * stiffness, motor gain, friction levels, stiction excess and time constant
 * from a seeded generator (spread seed 2024 + index, noise seed 1000 + index).
 */
ValveParams builtin_preset(const std::string& name);

/// key = value text, one parameter per line, '#' comments. Unknown keys throw ConfigError.
ValveParams parse_preset(const std::string& text);
std::string format_preset(const ValveParams& params);
ValveParams load_preset_file(const std::filesystem::path& path);

/// Built-in name, or a path to a preset file.
ValveParams resolve_preset(const std::string& name_or_path);

/// Assigns a single parameter by its preset-file key; throws ConfigError for unknown keys.
void set_parameter(ValveParams& params, const std::string& key, const std::string& value);
std::vector<std::string> parameter_keys();

}  // namespace valvelab::plant
