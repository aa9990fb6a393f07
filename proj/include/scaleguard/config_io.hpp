// JSON (de)serialization for SimConfig: scenario files on disk mirror the
// config structs section by section. Validation errors name the field.
#pragma once

#include <string>

#include "scaleguard/engine.hpp"

namespace scaleguard {

SimConfig config_from_json(const std::string& text);
SimConfig load_config(const std::string& path);
std::string config_to_json(const SimConfig& cfg);

}  // namespace scaleguard
