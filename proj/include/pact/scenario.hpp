#pragma once

#include <string>

#include "pact/world.hpp"

namespace pact {

// Loads a scenario document (YAML, `schema: 1`). See
// docs/file-formats.md for the schema. Throws SchemaError,
// UnknownAgentReference or SyntaxError with file positions prefixed.
World load_scenario_text(const std::string& text, const std::string& origin);

World load_scenario_file(const std::string& path);

}  // namespace pact
