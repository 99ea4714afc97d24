#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace auav::integration {

enum class ArgType { number, string, boolean, object, array, any };

const char* to_string(ArgType t);

struct ArgSpec {
  ArgType type = ArgType::any;
  bool required = false;
};

struct ToolDescriptor {
  std::string name;
  std::string description;
  std::map<std::string, ArgSpec> args;

  // Returns an empty string when args conform, else the first problem found.
  std::string check_args(const nlohmann::json& args) const;
};

nlohmann::json to_json(const ToolDescriptor& d);
nlohmann::json catalog_json(const std::vector<ToolDescriptor>& tools);

}  // namespace auav::integration
