#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace mvsc {

/// Validates a JSON value against the subset of JSON Schema used by the
/// shipped schemas: type, properties, required, items, enum, minItems,
/// minimum. Returns human-readable violations; empty means valid.
std::vector<std::string> validate_against_schema(const nlohmann::json& value,
                                                 const nlohmann::json& schema);

}  // namespace mvsc
