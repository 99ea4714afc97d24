#include "auav/reasoning/react.hpp"

#include <algorithm>

#include "auav/common/error.hpp"

namespace auav::reasoning {

nlohmann::json AbortReport::to_json() const {
  nlohmann::json pad = nlohmann::json::array();
  for (const auto& e : scratchpad) pad.push_back(reasoning::to_json(e));
  return {{"plan_id", plan_id},
          {"failed_step", failed_step},
          {"reason", reason},
          {"replan_count", replan_count},
          {"scratchpad", std::move(pad)}};
}

nlohmann::json to_json(const Exchange& e) {
  nlohmann::json j = {{"task", to_string(e.task)},
                      {"text", e.text},
                      {"latency_s", e.latency_s},
                      {"latency_emulated", e.latency_emulated},
                      {"parsed", e.parsed}};
  if (!e.error.empty()) j["error"] = e.error;
  return j;
}

nlohmann::json to_json(const ScratchEntry& e) {
  return {{"thought", e.thought}, {"action", e.action}, {"observation", e.observation}};
}

namespace {

Exchange call(Backend& backend, const Prompt& prompt, double timeout_s) {
  const BackendReply r = invoke_backend(backend, prompt, timeout_s);
  Exchange e;
  e.task = prompt.task;
  e.text = r.text;
  e.latency_s = r.latency_s;
  e.latency_emulated = r.latency_emulated;
  e.wall_clock_s = r.wall_clock_s;
  return e;
}

std::string join_violations(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += "; ";
    out += x.kind + " (step " + std::to_string(x.step_id) + "): " + x.detail;
  }
  return out;
}

}  // namespace

AssessResult assess(Backend& backend, const Prompt& prompt, double timeout_s) {
  AssessResult out;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Exchange e = call(backend, prompt, timeout_s);
    out.latency_s += e.latency_s;
    try {
      ParsedResponse parsed = parse_response(e.text);
      e.parsed = true;
      out.exchanges.push_back(e);
      out.response = std::move(parsed.response);
      out.warnings = std::move(parsed.warnings);
      return out;
    } catch (const Error& err) {
      e.error = err.what();
      out.exchanges.push_back(e);
      if (attempt == 1) throw;
    }
  }
  return out;
}

PlanResult plan(Backend& backend, Prompt prompt, const std::set<std::string>& tools,
                double timeout_s) {
  if (tools.empty()) throw Error(ErrorCode::invalid_argument, "plan: tool catalog is empty");
  if (prompt.task != PromptTask::reflect) prompt.task = PromptTask::plan;
  PlanResult out;
  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Exchange e = call(backend, prompt, timeout_s);
    try {
      PolicyGraph g = parse_policy_graph(extract_json_object(e.text));
      const auto violations = validate_policy_graph(g, &tools);
      if (!violations.empty()) {
        throw Error(ErrorCode::validation_error, "invalid policy graph: " + join_violations(violations));
      }
      e.parsed = true;
      out.exchanges.push_back(e);
      out.graph = std::move(g);
      return out;
    } catch (const Error& err) {
      last_error = err.what();
      e.error = last_error;
      out.exchanges.push_back(e);
    }
  }
  throw Error(ErrorCode::validation_error, last_error);
}

bool differs_from(const PolicyGraph& old_plan, const PolicyGraph& new_plan, int step) {
  for (const auto& s : old_plan.steps) {
    if (s.step_id >= step) continue;
    const PlanStep* n = new_plan.find(s.step_id);
    if (n == nullptr || !(*n == s)) return false;
  }
  for (const auto& s : new_plan.steps) {
    if (s.step_id < step && old_plan.find(s.step_id) == nullptr) return false;
  }
  auto tail = [step](const PolicyGraph& g) {
    std::vector<PlanStep> out;
    for (const auto& s : g.steps) {
      if (s.step_id >= step) out.push_back(s);
    }
    std::sort(out.begin(), out.end(),
              [](const PlanStep& a, const PlanStep& b) { return a.step_id < b.step_id; });
    return out;
  };
  return tail(old_plan) != tail(new_plan);
}

PlanResult reflect(ReactState& state, Backend& backend, Prompt prompt, int failed_step,
                   const std::string& feedback, const std::set<std::string>& tools,
                   double timeout_s) {
  if (!state.active_plan) throw Error(ErrorCode::invalid_argument, "reflect: no active plan");
  state.scratchpad.push_back({"step " + std::to_string(failed_step) + " failed",
                              "reflect", feedback});
  if (state.replan_count >= state.max_replans) {
    state.abort = AbortReport{state.active_plan->plan_id, failed_step, feedback,
                              state.replan_count, state.scratchpad};
    throw Error(ErrorCode::aborted, "mission aborted after " + std::to_string(state.replan_count) +
                                        " replans: " + feedback);
  }
  prompt.task = PromptTask::reflect;
  prompt.feedback = {{"plan", to_json(*state.active_plan)},
                     {"failed_step", failed_step},
                     {"reason", feedback}};
  PlanResult r = plan(backend, prompt, tools, timeout_s);
  if (!differs_from(*state.active_plan, r.graph, failed_step)) {
    throw Error(ErrorCode::validation_error,
                "revised plan does not change the failed step or anything after it");
  }
  ++state.replan_count;
  state.scratchpad.push_back({"revised plan " + r.graph.plan_id, "replan",
                              std::to_string(r.graph.steps.size()) + " steps"});
  state.active_plan = r.graph;
  return r;
}

Classification classify_event(const perception::WorldModel& world, const AgentResponse& response) {
  Classification c;
  bool persistent = false;
  for (const auto& d : response.detections) {
    const auto* o = world.find(d.id);
    if (o == nullptr) {
      c.warnings.push_back("response references unknown object '" + d.id + "'");
      continue;
    }
    if (o->category != sim::Category::person || o->frames_stationary < kPersistenceFrames) continue;
    const bool isolated = world.has_relation(o->id, "isolated");
    if (!persistent || (isolated && !world.has_relation(c.target_id, "isolated"))) {
      c.target_id = o->id;
    }
    persistent = true;
  }
  if (response.severity == Severity::critical && persistent) c.severity = Severity::critical;
  if (response.severity == Severity::critical && !persistent) {
    c.target_id.clear();
    c.warnings.push_back("critical response without a persistent stationary track; treated as normal");
  }
  return c;
}

}  // namespace auav::reasoning
