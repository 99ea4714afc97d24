#include "auav/reasoning/policy.hpp"

#include <algorithm>
#include <charconv>
#include <queue>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/reasoning/precondition.hpp"

namespace auav::reasoning {

const char* to_string(ActionKind a) {
  switch (a) {
    case ActionKind::call_tool: return "call_tool";
    case ActionKind::fly_to: return "fly_to";
    case ActionKind::land_and_deploy: return "land_and_deploy";
    case ActionKind::loiter: return "loiter";
    case ActionKind::report: return "report";
  }
  return "?";
}

const char* to_string(OnFail f) {
  switch (f) {
    case OnFail::trigger_reflection: return "trigger_reflection";
    case OnFail::abort: return "abort";
    case OnFail::skip: return "skip";
  }
  return "?";
}

ActionKind action_from_string(const std::string& s) {
  for (auto a : {ActionKind::call_tool, ActionKind::fly_to, ActionKind::land_and_deploy,
                 ActionKind::loiter, ActionKind::report}) {
    if (s == to_string(a)) return a;
  }
  throw Error(ErrorCode::parse_error, "unknown action '" + s + "'");
}

OnFail on_fail_from_string(const std::string& s) {
  for (auto f : {OnFail::trigger_reflection, OnFail::abort, OnFail::skip}) {
    if (s == to_string(f)) return f;
  }
  throw Error(ErrorCode::parse_error, "unknown on_fail '" + s + "'");
}

const PlanStep* PolicyGraph::find(int step_id) const {
  for (const auto& s : steps) {
    if (s.step_id == step_id) return &s;
  }
  return nullptr;
}

nlohmann::json to_json(const PolicyGraph& g) {
  json steps = json::array();
  for (const auto& s : g.steps) {
    json js = {{"step_id", s.step_id}, {"action", to_string(s.action)}, {"args", s.args}};
    if (s.tool_name) js["tool_name"] = *s.tool_name;
    if (!s.preconditions.empty()) js["preconditions"] = s.preconditions;
    if (s.on_fail) js["on_fail"] = to_string(*s.on_fail);
    if (!s.context_scope.empty()) js["context_scope"] = s.context_scope;
    steps.push_back(std::move(js));
  }
  json deps = json::object();
  for (const auto& [k, v] : g.dependencies) deps[std::to_string(k)] = v;
  return {{"plan_id", g.plan_id}, {"goal", g.goal}, {"steps", std::move(steps)},
          {"dependencies", std::move(deps)}};
}

namespace {

int parse_step_id(const std::string& k, const std::string& path) {
  int id = 0;
  const auto [end, ec] = std::from_chars(k.data(), k.data() + k.size(), id);
  if (k.empty() || ec != std::errc() || end != k.data() + k.size()) {
    throw Error(ErrorCode::parse_error, path + ": '" + k + "' is not a step id");
  }
  return id;
}

}  // namespace

PolicyGraph policy_graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::parse_error, "policy graph: expected object");
  PolicyGraph g;
  g.plan_id = field::get<std::string>(j, "plan_id", "plan");
  g.goal = field::get_or<std::string>(j, "goal", "plan", "");
  const json& steps = field::require(j, "steps", "plan");
  if (!steps.is_array()) field::throw_type_error("plan.steps", "expected array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string path = field::index("plan.steps", i);
    const json& js = steps[i];
    if (!js.is_object()) field::throw_type_error(path, "expected object");
    PlanStep s;
    s.step_id = field::get<int>(js, "step_id", path);
    s.action = action_from_string(field::get<std::string>(js, "action", path));
    if (js.contains("tool_name") && !js.at("tool_name").is_null()) {
      s.tool_name = field::get<std::string>(js, "tool_name", path);
    }
    s.args = field::get_or<json>(js, "args", path, json::object());
    if (!s.args.is_object()) field::throw_type_error(field::join(path, "args"), "expected object");
    s.preconditions = field::get_or<std::vector<std::string>>(js, "preconditions", path, {});
    if (js.contains("on_fail")) {
      s.on_fail = on_fail_from_string(field::get<std::string>(js, "on_fail", path));
    }
    s.context_scope = field::get_or<std::vector<std::string>>(js, "context_scope", path, {});
    g.steps.push_back(std::move(s));
  }
  const json deps = field::get_or<json>(j, "dependencies", "plan", json::object());
  if (!deps.is_object()) field::throw_type_error("plan.dependencies", "expected object");
  for (const auto& [k, v] : deps.items()) {
    const std::string path = "plan.dependencies." + k;
    const int id = parse_step_id(k, "plan.dependencies");
    if (!v.is_array()) field::throw_type_error(path, "expected array");
    auto& out = g.dependencies[id];
    // Entries may be numbers or decimal strings ("1").
    for (const auto& e : v) {
      if (e.is_number_integer()) {
        out.push_back(e.get<int>());
      } else if (e.is_string()) {
        out.push_back(parse_step_id(e.get<std::string>(), path));
      } else {
        field::throw_type_error(path, "expected step ids");
      }
    }
  }
  return g;
}

PolicyGraph parse_policy_graph(std::string_view text) {
  return policy_graph_from_json(parse_json_text(text, "policy graph"));
}

namespace {

// Returns true if the dependency relation restricted to known steps contains a cycle.
bool has_cycle(const PolicyGraph& g, const std::set<int>& ids) {
  std::map<int, int> indegree;
  std::map<int, std::vector<int>> children;
  for (int id : ids) indegree[id] = 0;
  for (const auto& [step, deps] : g.dependencies) {
    if (!ids.contains(step)) continue;
    for (int d : deps) {
      if (!ids.contains(d)) continue;
      ++indegree[step];
      children[d].push_back(step);
    }
  }
  std::queue<int> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const int id = ready.front();
    ready.pop();
    ++visited;
    for (int c : children[id]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  return visited != ids.size();
}

std::set<int> ancestors(const PolicyGraph& g, int step) {
  std::set<int> seen;
  std::vector<int> stack{step};
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    auto it = g.dependencies.find(s);
    if (it == g.dependencies.end()) continue;
    for (int d : it->second) {
      if (seen.insert(d).second) stack.push_back(d);
    }
  }
  seen.erase(step);
  return seen;
}

}  // namespace

std::vector<Violation> validate_policy_graph(const PolicyGraph& g,
                                             const std::set<std::string>* tool_catalog) {
  std::vector<Violation> out;
  if (g.steps.empty()) out.push_back({"empty plan", 0, "plan has no steps"});

  std::set<int> ids;
  for (const auto& s : g.steps) {
    if (!ids.insert(s.step_id).second) {
      out.push_back({"duplicate step", s.step_id, "step_id appears more than once"});
    }
  }
  for (const auto& [step, deps] : g.dependencies) {
    if (!ids.contains(step)) {
      out.push_back({"unknown step", step, "dependency key names no step"});
    }
    for (int d : deps) {
      if (!ids.contains(d)) {
        out.push_back({"unknown step", step, "depends on missing step " + std::to_string(d)});
      }
      if (d == step) out.push_back({"cycle", step, "step depends on itself"});
    }
  }
  if (has_cycle(g, ids)) out.push_back({"cycle", 0, "dependency graph is not acyclic"});

  for (const auto& s : g.steps) {
    if (!s.on_fail) out.push_back({"missing on_fail", s.step_id, "on_fail is required"});
    const bool is_tool = s.action == ActionKind::call_tool;
    if (is_tool != s.tool_name.has_value()) {
      out.push_back({"tool_name mismatch", s.step_id,
                     is_tool ? "call_tool without tool_name" : "tool_name on a non-tool step"});
    }
    if (is_tool && s.tool_name && tool_catalog != nullptr && !tool_catalog->contains(*s.tool_name)) {
      out.push_back({"unknown tool", s.step_id, "tool '" + *s.tool_name + "' is not registered"});
    }
    const std::set<int> upstream = ancestors(g, s.step_id);
    for (const auto& text : s.preconditions) {
      Precondition p;
      try {
        p = parse_precondition(text);
      } catch (const Error& e) {
        out.push_back({"precondition parse", s.step_id, e.what()});
        continue;
      }
      for (int ref : p.referenced_steps()) {
        if (!ids.contains(ref)) {
          out.push_back({"unknown step", s.step_id, "precondition references step_" +
                                                        std::to_string(ref)});
        } else if (!upstream.contains(ref)) {
          out.push_back({"non-dependency reference", s.step_id,
                         "precondition reads step_" + std::to_string(ref) +
                             " which is not a dependency"});
        }
      }
    }
  }
  return out;
}

std::vector<int> topological_order(const PolicyGraph& g) {
  std::set<int> ids;
  for (const auto& s : g.steps) ids.insert(s.step_id);
  std::map<int, int> indegree;
  std::map<int, std::vector<int>> children;
  for (int id : ids) indegree[id] = 0;
  for (const auto& [step, deps] : g.dependencies) {
    if (!ids.contains(step)) {
      throw Error(ErrorCode::validation_error, "dependency on unknown step " + std::to_string(step));
    }
    for (int d : deps) {
      if (!ids.contains(d)) {
        throw Error(ErrorCode::validation_error, "dependency on unknown step " + std::to_string(d));
      }
      ++indegree[step];
      children[d].push_back(step);
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int id = ready.top();
    ready.pop();
    order.push_back(id);
    for (int c : children[id]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != ids.size()) {
    throw Error(ErrorCode::validation_error, "dependency graph contains a cycle");
  }
  return order;
}

}  // namespace auav::reasoning
