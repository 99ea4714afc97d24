#include "auav/integration/tool.hpp"

namespace auav::integration {

const char* to_string(ArgType t) {
  switch (t) {
    case ArgType::number: return "number";
    case ArgType::string: return "string";
    case ArgType::boolean: return "boolean";
    case ArgType::object: return "object";
    case ArgType::array: return "array";
    case ArgType::any: return "any";
  }
  return "?";
}

namespace {

bool matches(ArgType t, const nlohmann::json& v) {
  switch (t) {
    case ArgType::number: return v.is_number();
    case ArgType::string: return v.is_string();
    case ArgType::boolean: return v.is_boolean();
    case ArgType::object: return v.is_object();
    case ArgType::array: return v.is_array();
    case ArgType::any: return true;
  }
  return false;
}

}  // namespace

std::string ToolDescriptor::check_args(const nlohmann::json& a) const {
  if (!a.is_object()) return "args must be an object";
  for (const auto& [key, spec] : args) {
    if (!a.contains(key)) {
      if (spec.required) return "missing required arg '" + key + "'";
      continue;
    }
    if (!matches(spec.type, a.at(key))) {
      return "arg '" + key + "' must be " + to_string(spec.type);
    }
  }
  for (const auto& [key, v] : a.items()) {
    if (!args.contains(key)) return "unexpected arg '" + key + "'";
  }
  return "";
}

nlohmann::json to_json(const ToolDescriptor& d) {
  nlohmann::json args = nlohmann::json::object();
  for (const auto& [k, spec] : d.args) {
    args[k] = {{"type", to_string(spec.type)}, {"required", spec.required}};
  }
  return {{"name", d.name}, {"description", d.description}, {"args", std::move(args)}};
}

nlohmann::json catalog_json(const std::vector<ToolDescriptor>& tools) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : tools) out.push_back(to_json(t));
  return out;
}

}  // namespace auav::integration
