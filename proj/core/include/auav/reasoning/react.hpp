#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/reasoning/backend.hpp"

namespace auav::reasoning {

struct ScratchEntry {
  std::string thought;
  std::string action;
  std::string observation;

  friend bool operator==(const ScratchEntry&, const ScratchEntry&) = default;
};

struct AbortReport {
  std::string plan_id;
  int failed_step = 0;
  std::string reason;
  int replan_count = 0;
  std::vector<ScratchEntry> scratchpad;

  nlohmann::json to_json() const;
};

struct ReactState {
  std::vector<ScratchEntry> scratchpad;
  int replan_count = 0;
  int max_replans = 3;
  std::optional<PolicyGraph> active_plan;
  std::optional<AbortReport> abort;
};

// Every backend exchange made by the helpers below, in order. The mission log
// stores these so a run can be replayed.
struct Exchange {
  PromptTask task = PromptTask::assess;
  std::string text;
  double latency_s = 0.0;
  bool latency_emulated = false;
  double wall_clock_s = 0.0;
  bool parsed = false;
  std::string error;
};

struct AssessResult {
  AgentResponse response;
  std::vector<std::string> warnings;
  std::vector<Exchange> exchanges;
  double latency_s = 0.0;  // summed over attempts
};

// Invokes the backend and parses its reply, with one retry on a parse or validation
// failure. Throws the last error if the retry fails too.
AssessResult assess(Backend& backend, const Prompt& prompt, double timeout_s);

struct PlanResult {
  PolicyGraph graph;
  std::vector<Exchange> exchanges;
};

// Asks the backend for a policy graph and validates it against the tool catalog,
// with one retry. Throws Error(validation_error) listing the violations otherwise.
PlanResult plan(Backend& backend, Prompt prompt, const std::set<std::string>& tools,
                double timeout_s);

// One reflection cycle. Appends the failure to the scratchpad and installs a revised
// plan that differs from the old one at or after the failed step. When max_replans is
// already reached the state gets an abort report instead and Error(aborted) is thrown.
PlanResult reflect(ReactState& state, Backend& backend, Prompt prompt, int failed_step,
                   const std::string& feedback, const std::set<std::string>& tools,
                   double timeout_s);

// True when plans a and b agree on every step before `step` and differ somewhere at or
// after it.
bool differs_from(const PolicyGraph& old_plan, const PolicyGraph& new_plan, int step);

struct Classification {
  Severity severity = Severity::normal;
  std::vector<std::string> warnings;
  std::string target_id;  // the track that satisfied the persistence predicate
};

// Critical only when the response says critical and some person track it names has
// frames_stationary >= kPersistenceFrames. Unknown ids produce a warning and are ignored.
// Among qualifying tracks an isolated one is preferred as the target.
Classification classify_event(const perception::WorldModel& world, const AgentResponse& response);

nlohmann::json to_json(const Exchange& e);
nlohmann::json to_json(const ScratchEntry& e);

}  // namespace auav::reasoning
