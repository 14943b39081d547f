#pragma once

#include "sphtraffic/scenario.hpp"

#include <cstdint>
#include <string>

namespace sphtraffic {

// Parse a scenario config from JSON text. Unknown keys are errors; messages
// carry the JSON path of the offending field. Defaults are filled for any
// omitted optional field. Does not run cross-module validation (callers use
// validate_config for that).
ScenarioConfig parse_config_text(const std::string& json_text,
                                 const std::string& origin = "<string>");

// Load from a file; I/O failures throw std::ios_base::failure.
ScenarioConfig parse_config_file(const std::string& path);

// Canonical serialization: fixed key order, every default spelled out.
// parse_config_text(serialize_config(c)) round-trips to an identical config.
std::string serialize_config(const ScenarioConfig& cfg);

// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const ScenarioConfig& cfg);

bool config_equal(const ScenarioConfig& a, const ScenarioConfig& b);

// Resolve "builtin:<name>" to a builder, otherwise treat as a file path.
ScenarioConfig load_scenario(const std::string& spec);

}  // namespace sphtraffic
