#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <regex>
#include <set>

#include "auav/common/error.hpp"
#include "auav/common/text.hpp"
#include "auav/reasoning/backend.hpp"

namespace auav::reasoning {

using perception::WorldModel;

const char* to_string(Tier t) {
  switch (t) {
    case Tier::rule: return "rule_based";
    case Tier::local: return "agentic_local";
    case Tier::cloud: return "agentic_cloud";
  }
  return "?";
}

Tier tier_from_string(const std::string& s) {
  if (s == "rule" || s == "rule_based" || s == "rule_only") return Tier::rule;
  if (s == "local" || s == "agentic_local") return Tier::local;
  if (s == "cloud" || s == "agentic_cloud") return Tier::cloud;
  throw Error(ErrorCode::invalid_argument, "unknown tier '" + s + "'");
}

// Latencies and rates are emulation targets. With a quarter of scenes being
// emergencies (always actionable and described), the non-emergency probabilities
// p = (target - 0.25) / 0.75 give the overall target rate in expectation.
TierProfile TierProfile::for_tier(Tier t) {
  switch (t) {
    case Tier::rule: return {29.5e-6, 9.4e-6, 0.0, 0.0, 0.716, 0.08};
    case Tier::local: return {1.48, 0.58, (0.79 - 0.25) / 0.75, (0.88 - 0.25) / 0.75, 0.760, 0.08};
    case Tier::cloud: return {4.95, 1.15, (0.92 - 0.25) / 0.75, (0.94 - 0.25) / 0.75, 0.790, 0.08};
  }
  return {};
}

std::vector<std::string> emergency_candidates(const WorldModel& world) {
  std::vector<std::string> out;
  for (const auto& o : world.objects) {
    if (o.category == sim::Category::person && o.frames_stationary >= kPersistenceFrames &&
        world.has_relation(o.id, "isolated")) {
      out.push_back(o.id);
    }
  }
  return out;
}

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

EmissionSchedule::EmissionSchedule(double p_action, double p_context, Rng& rng)
    : p_action_(p_action), p_context_(p_context), action_acc_(rng.uniform()), context_acc_(rng.uniform()) {
  if (!(p_action >= 0.0 && p_action <= 1.0) || !(p_context >= 0.0 && p_context <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "emission probabilities must be in [0, 1]");
  }
}

bool EmissionSchedule::step(double& acc, double p) {
  acc += p;
  if (acc < 1.0) return false;
  acc -= 1.0;
  return true;
}

AgentResponse scripted_respond(const WorldModel& world, Tier tier, Rng& rng, EmissionSchedule& schedule) {
  const TierProfile profile = TierProfile::for_tier(tier);
  AgentResponse r;
  std::size_t persons = 0;
  std::size_t stationary = 0;
  double speed_sum = 0.0;
  for (const auto& o : world.objects) {
    const double c = std::clamp(rng.normal(profile.confidence_mean, profile.confidence_sd), 0.0, 1.0);
    if (o.category != sim::Category::person) continue;
    ++persons;
    speed_sum += std::hypot(o.vel.x, o.vel.y);
    if (o.frames_stationary >= kPersistenceFrames) ++stationary;
    r.detections.push_back({o.id, c});
  }
  const auto candidates = emergency_candidates(world);
  if (!candidates.empty()) {
    const auto* target = world.find(candidates.front());
    r.severity = Severity::critical;
    r.recommended_actions = {"deploy rescue kit", "alert medical unit"};
    r.surrounding_features = "Person " + target->id + " motionless for " +
                             std::to_string(target->frames_stationary) +
                             " frames with no other person nearby; " +
                             std::to_string(persons - 1) + " other people tracked in view.";
    r.rationale = "Stationary persistence and isolation both hold for " + target->id + ".";
    return r;
  }
  if (persons == 0) {
    r.surrounding_features = "No people in view.";
    r.rationale = "Nothing to assess.";
    return r;
  }
  if (schedule.next_action()) r.recommended_actions = {"continue routine monitoring"};
  if (schedule.next_context()) {
    r.surrounding_features = std::to_string(persons) + " people tracked, mean ground speed " +
                             fmt("%.2f", speed_sum / static_cast<double>(persons)) + " m/s, " +
                             std::to_string(stationary) +
                             " stationary; movement consistent with normal pedestrian flow.";
  } else {
    r.surrounding_features = std::to_string(persons) + " people in view.";
  }
  r.rationale = "No isolated stationary person.";
  return r;
}

namespace {

PlanStep weather_step(int id, const std::string& location) {
  PlanStep s;
  s.step_id = id;
  s.action = ActionKind::call_tool;
  s.tool_name = "api.weather.get_forecast";
  s.args = {{"location", location}};
  s.on_fail = OnFail::trigger_reflection;
  return s;
}

PlanStep loiter_step(int id, double seconds) {
  PlanStep s;
  s.step_id = id;
  s.action = ActionKind::loiter;
  s.args = {{"duration_s", seconds}};
  s.on_fail = OnFail::skip;
  return s;
}

PlanStep report_step(int id, const std::string& message) {
  PlanStep s;
  s.step_id = id;
  s.action = ActionKind::report;
  s.args = {{"message", message}};
  s.on_fail = OnFail::skip;
  return s;
}

}  // namespace

PolicyGraph scripted_plan(const std::string& goal, const WorldModel& world,
                          const std::string& plan_id) {
  PolicyGraph g;
  g.plan_id = plan_id;
  g.goal = goal;
  const std::string lower = text::to_lower(goal);
  const auto candidates = emergency_candidates(world);

  if (text::contains(lower, "loiter")) {
    g.steps.push_back(loiter_step(1, 10.0));
    g.steps.back().on_fail = OnFail::trigger_reflection;
    return g;
  }
  if (text::contains(lower, "inspect perimeter anomaly")) {
    g.steps.push_back(weather_step(1, "Anomaly-01"));
    PlanStep fly;
    fly.step_id = 2;
    fly.action = ActionKind::fly_to;
    fly.args = {{"target_id", "Anomaly-01"}};
    fly.preconditions = {"step_1.wind_speed < 15"};
    fly.on_fail = OnFail::trigger_reflection;
    g.steps.push_back(fly);
    g.dependencies[2] = {1};
    return g;
  }
  if (!candidates.empty()) {
    const std::string& target = candidates.front();
    const std::string summary = "Person " + target + " motionless and isolated; rescue kit deployment under way.";
    const nlohmann::json actions = nlohmann::json::array({"deploy rescue kit", "alert medical unit"});

    g.steps.push_back(weather_step(1, target));
    PlanStep land;
    land.step_id = 2;
    land.action = ActionKind::land_and_deploy;
    land.args = {{"target_id", target}};
    land.preconditions = {"step_1.wind_speed < 15"};
    land.on_fail = OnFail::trigger_reflection;
    g.steps.push_back(land);

    PlanStep alert;
    alert.step_id = 3;
    alert.action = ActionKind::call_tool;
    alert.tool_name = "alert.dispatch";
    alert.args = {{"target_id", target},
                  {"severity", "critical"},
                  {"summary", summary},
                  {"recommended_actions", actions}};
    alert.context_scope = {"objects", "timestamp"};
    alert.on_fail = OnFail::trigger_reflection;
    g.steps.push_back(alert);

    PlanStep log;
    log.step_id = 4;
    log.action = ActionKind::call_tool;
    log.tool_name = "db.log_incident";
    log.args = {{"target_id", target}, {"severity", "critical"}, {"summary", summary}};
    log.context_scope = {"objects"};
    log.on_fail = OnFail::skip;
    g.steps.push_back(log);

    g.dependencies[2] = {1};
    g.dependencies[4] = {3};
    return g;
  }
  g.steps.push_back(report_step(1, goal));
  return g;
}

namespace {

const std::regex kStepRef(R"(step_(\d+)\.)");

std::string rewrite_refs(const std::string& text, const std::map<int, int>& remap) {
  std::string out;
  std::size_t last = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kStepRef); it != std::sregex_iterator();
       ++it) {
    const auto& m = *it;
    out.append(text, last, static_cast<std::size_t>(m.position(0)) - last);
    const int old = std::stoi(m.str(1));
    const auto f = remap.find(old);
    out += "step_" + std::to_string(f == remap.end() ? old : f->second) + ".";
    last = static_cast<std::size_t>(m.position(0) + m.length(0));
  }
  out.append(text, last, std::string::npos);
  return out;
}

bool is_weather(const PlanStep& s) {
  return s.action == ActionKind::call_tool && s.tool_name == "api.weather.get_forecast";
}

bool is_physical(const PlanStep& s) {
  return s.action == ActionKind::fly_to || s.action == ActionKind::land_and_deploy ||
         s.action == ActionKind::loiter;
}

// Weather step whose output gates the given step, or 0.
int gating_weather_step(const PolicyGraph& g, const PlanStep& s) {
  for (const auto& text : s.preconditions) {
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kStepRef);
         it != std::sregex_iterator(); ++it) {
      const int ref = std::stoi((*it).str(1));
      const PlanStep* r = g.find(ref);
      if (r != nullptr && is_weather(*r)) return ref;
    }
  }
  return 0;
}

std::vector<PlanStep> sorted_steps(const PolicyGraph& g) {
  std::vector<PlanStep> steps = g.steps;
  std::sort(steps.begin(), steps.end(),
            [](const PlanStep& a, const PlanStep& b) { return a.step_id < b.step_id; });
  return steps;
}

PolicyGraph defer_behind_weather(const PolicyGraph& plan, const PlanStep& failed, int weather_src,
                                 const std::string& plan_id) {
  PolicyGraph g;
  g.plan_id = plan_id;
  g.goal = plan.goal;
  const auto steps = sorted_steps(plan);
  const int f = failed.step_id;
  const bool drop_failed = is_weather(failed);

  std::map<int, int> remap;
  int next = f;
  const int loiter_id = next++;
  const int weather_id = next++;
  for (const auto& s : steps) {
    if (s.step_id < f) remap[s.step_id] = s.step_id;
  }
  if (!drop_failed) remap[f] = next++;
  for (const auto& s : steps) {
    if (s.step_id > f) remap[s.step_id] = next++;
  }
  remap[weather_src] = weather_id;
  if (drop_failed) remap[f] = weather_id;

  auto deps_of = [&](int old) {
    std::vector<int> out;
    auto it = plan.dependencies.find(old);
    if (it == plan.dependencies.end()) return out;
    for (int d : it->second) out.push_back(remap.at(d));
    return out;
  };

  for (const auto& s : steps) {
    if (s.step_id < f) {
      g.steps.push_back(s);
      auto it = plan.dependencies.find(s.step_id);
      if (it != plan.dependencies.end()) g.dependencies[s.step_id] = it->second;
    }
  }
  PlanStep loiter = loiter_step(loiter_id, 10.0);
  g.steps.push_back(loiter);
  {
    std::vector<int> d;
    auto it = plan.dependencies.find(f);
    if (it != plan.dependencies.end()) {
      for (int x : it->second) {
        if (x < f && x != weather_src) d.push_back(x);
      }
    }
    if (!d.empty()) g.dependencies[loiter_id] = d;
  }
  PlanStep weather = weather_step(weather_id, is_weather(failed) ? failed.args.value("location", "")
                                                                  : plan.find(weather_src)->args.value("location", ""));
  g.steps.push_back(weather);
  g.dependencies[weather_id] = {loiter_id};

  for (const auto& s : steps) {
    if (s.step_id < f || (drop_failed && s.step_id == f)) continue;
    PlanStep c = s;
    c.step_id = remap.at(s.step_id);
    for (auto& p : c.preconditions) p = rewrite_refs(p, remap);
    auto d = deps_of(s.step_id);
    if (s.step_id == f && std::find(d.begin(), d.end(), weather_id) == d.end()) {
      d.push_back(weather_id);
    }
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    if (!d.empty()) g.dependencies[c.step_id] = d;
    g.steps.push_back(std::move(c));
  }
  return g;
}

}  // namespace

PolicyGraph scripted_reflect(const PolicyGraph& plan, int failed_step, const std::string& reason,
                             const std::string& plan_id) {
  const PlanStep* failed = plan.find(failed_step);
  if (failed == nullptr) {
    throw Error(ErrorCode::invalid_argument, "reflect: unknown failed step " + std::to_string(failed_step));
  }
  if (is_weather(*failed)) return defer_behind_weather(plan, *failed, failed->step_id, plan_id);
  if (text::starts_with(reason, "precondition")) {
    if (const int w = gating_weather_step(plan, *failed); w != 0) {
      return defer_behind_weather(plan, *failed, w, plan_id);
    }
  }

  PolicyGraph g = plan;
  g.plan_id = plan_id;
  auto it = std::find_if(g.steps.begin(), g.steps.end(),
                         [&](const PlanStep& s) { return s.step_id == failed_step; });
  const bool can_clamp = text::starts_with(reason, "geofence") &&
                         (failed->action == ActionKind::fly_to ||
                          failed->action == ActionKind::land_and_deploy) &&
                         !failed->args.value("clamp_to_geofence", false);
  if (can_clamp) {
    it->args["clamp_to_geofence"] = true;
    return g;
  }
  *it = report_step(failed_step, "step " + std::to_string(failed_step) + " failed: " + reason);
  // Later physical steps are dropped; digital steps (alerts, logs) are kept.
  std::set<int> dropped;
  for (const auto& s : plan.steps) {
    if (s.step_id > failed_step && is_physical(s)) dropped.insert(s.step_id);
  }
  std::erase_if(g.steps, [&](const PlanStep& s) { return dropped.contains(s.step_id); });
  for (int d : dropped) g.dependencies.erase(d);
  for (auto& [k, deps] : g.dependencies) {
    std::erase_if(deps, [&](int d) { return dropped.contains(d); });
  }
  std::erase_if(g.dependencies, [](const auto& kv) { return kv.second.empty(); });
  for (auto& s : g.steps) {
    std::erase_if(s.preconditions, [&](const std::string& p) {
      for (auto m = std::sregex_iterator(p.begin(), p.end(), kStepRef); m != std::sregex_iterator(); ++m) {
        if (dropped.contains(std::stoi((*m).str(1)))) return true;
      }
      return false;
    });
  }
  return g;
}

}  // namespace auav::reasoning
