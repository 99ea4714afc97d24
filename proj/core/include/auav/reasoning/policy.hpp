#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace auav::reasoning {

enum class ActionKind { call_tool, fly_to, land_and_deploy, loiter, report };
enum class OnFail { trigger_reflection, abort, skip };

const char* to_string(ActionKind a);
const char* to_string(OnFail f);
ActionKind action_from_string(const std::string& s);
OnFail on_fail_from_string(const std::string& s);

struct PlanStep {
  int step_id = 0;
  ActionKind action = ActionKind::report;
  std::optional<std::string> tool_name;
  nlohmann::json args = nlohmann::json::object();
  std::vector<std::string> preconditions;
  std::optional<OnFail> on_fail;  // required; optional only so the validator can report its absence
  std::vector<std::string> context_scope;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct PolicyGraph {
  std::string plan_id;
  std::string goal;
  std::vector<PlanStep> steps;
  std::map<int, std::vector<int>> dependencies;

  const PlanStep* find(int step_id) const;
  friend bool operator==(const PolicyGraph&, const PolicyGraph&) = default;
};

// Wire keys: plan_id, goal, steps, step_id, action, tool_name, args, preconditions,
// on_fail, dependencies. Dependency keys are decimal strings. context_scope is an
// optional extension on steps.
nlohmann::json to_json(const PolicyGraph& g);
PolicyGraph policy_graph_from_json(const nlohmann::json& j);
PolicyGraph parse_policy_graph(std::string_view text);

struct Violation {
  std::string kind;  // cycle, unknown step, duplicate step, precondition parse, unknown tool,
                     // tool_name mismatch, missing on_fail, non-dependency reference, empty plan
  int step_id = 0;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Collects every violation. Tools are checked only when a catalog is given.
std::vector<Violation> validate_policy_graph(const PolicyGraph& g,
                                             const std::set<std::string>* tool_catalog = nullptr);

// Kahn's algorithm with ties broken by ascending step_id. Throws Error(validation_error)
// on a cycle or unknown reference.
std::vector<int> topological_order(const PolicyGraph& g);

}  // namespace auav::reasoning
