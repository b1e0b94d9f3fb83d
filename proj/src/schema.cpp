#include "mvsc/schema.hpp"

namespace mvsc {

namespace {

using nlohmann::json;

bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

void validate_node(const json& value, const json& schema, const std::string& path,
                   std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const std::string type = schema["type"].get<std::string>();
    if (!type_matches(value, type)) {
      errors.push_back(path + ": expected " + type + ", got " + value.type_name());
      return;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& candidate : schema["enum"])
      if (candidate == value) found = true;
    if (!found) errors.push_back(path + ": value not in enum");
  }
  if (schema.contains("minimum") && value.is_number() &&
      value.get<double>() < schema["minimum"].get<double>())
    errors.push_back(path + ": below minimum " + schema["minimum"].dump());
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required field '" + key.get<std::string>() + "'");
    if (schema.contains("properties"))
      for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
        if (value.contains(it.key()))
          validate_node(value[it.key()], it.value(), path + "/" + it.key(), errors);
  }
  if (value.is_array()) {
    if (schema.contains("minItems") &&
        value.size() < schema["minItems"].get<size_t>())
      errors.push_back(path + ": fewer than " + schema["minItems"].dump() + " items");
    if (schema.contains("items"))
      for (size_t i = 0; i < value.size(); ++i)
        validate_node(value[i], schema["items"], path + "/" + std::to_string(i), errors);
  }
}

}  // namespace

std::vector<std::string> validate_against_schema(const nlohmann::json& value,
                                                 const nlohmann::json& schema) {
  std::vector<std::string> errors;
  validate_node(value, schema, "", errors);
  return errors;
}

}  // namespace mvsc
