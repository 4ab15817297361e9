#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "beacon_forge/core.hpp"

namespace beacon_forge {

/// Parses a scenario document. Syntax errors, unknown keys and wrong value
/// types raise ConfigParse; value-level problems surface from validation.
Scenario parse_scenario(std::string_view json_text);

ValidatedScenario load_scenario(const std::filesystem::path& path);

/// Canonical JSON form (2-space indent, fixed key order, trailing newline).
std::string scenario_to_json(const Scenario& scenario);

}  // namespace beacon_forge
