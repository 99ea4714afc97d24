#include "auav/mission/mission.hpp"

#include "auav/mission/scene_pool.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "auav/action/executor.hpp"
#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/common/text.hpp"
#include "auav/integration/auction.hpp"
#include "auav/integration/gateway.hpp"
#include "auav/integration/mock_tools.hpp"
#include "auav/learning/memory.hpp"
#include "auav/perception/pipeline.hpp"
#include "auav/reasoning/policy.hpp"
#include "auav/reasoning/prompt.hpp"
#include "auav/sim/world.hpp"

namespace auav::mission {

namespace fs = std::filesystem;
using nlohmann::json;
using reasoning::Tier;
using Clock = std::chrono::steady_clock;

namespace {

constexpr const char* kRunFormat = "auav-run";
constexpr std::size_t kContextSnippets = 3;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Sequenced JSON Lines log. Entries never carry wall-clock values, so two runs with the
// same inputs write identical bytes.
class MissionLog {
 public:
  explicit MissionLog(const fs::path& path) : out_(path) {}

  void write(const std::string& type, std::uint64_t tick, json payload = json::object()) {
    payload["seq"] = ++seq_;
    payload["tick"] = tick;
    payload["type"] = type;
    out_.write(payload);
  }

 private:
  JsonlWriter out_;
  std::uint64_t seq_ = 0;
};

std::string chain_digest(const std::string& prev, const std::string& task, const std::string& text) {
  return text::fingerprint(prev + "\n" + task + "\n" + text);
}

// Wraps the mission's backend so every call, failed or not, lands in the mission log
// in call order. Replay depends on that order.
class LoggedBackend : public reasoning::Backend {
 public:
  LoggedBackend(reasoning::Backend& inner, MissionLog& log, const sim::SimState& world)
      : inner_(inner), log_(log), world_(world) {}

  std::string name() const override { return inner_.name(); }

  reasoning::BackendReply complete(const reasoning::Prompt& prompt, double timeout_s) override {
    ++calls_;
    const std::string task = reasoning::to_string(prompt.task);
    json entry{{"task", task}};
    try {
      reasoning::BackendReply reply = reasoning::invoke_backend(inner_, prompt, timeout_s);
      wall_.push_back(reply.wall_clock_s);
      last_emulated_ = reply.latency_emulated;
      digest_ = chain_digest(digest_, task, reply.text);
      entry["text"] = reply.text;
      entry["latency_s"] = reply.latency_s;
      entry["latency_emulated"] = reply.latency_emulated;
      entry["digest"] = digest_;
      log_.write("exchange", world_.tick, std::move(entry));
      reply.latency_recorded = true;
      return reply;
    } catch (const Error& e) {
      digest_ = chain_digest(digest_, task, std::string("error:") + e.what());
      entry["error_code"] = std::string(to_string(e.code()));
      entry["error"] = e.what();
      entry["digest"] = digest_;
      log_.write("exchange", world_.tick, std::move(entry));
      throw;
    }
  }

  std::size_t calls() const { return calls_; }
  bool last_emulated() const { return last_emulated_; }
  const std::vector<double>& wall_clock() const { return wall_; }

 private:
  reasoning::Backend& inner_;
  MissionLog& log_;
  const sim::SimState& world_;
  std::string digest_;
  std::size_t calls_ = 0;
  bool last_emulated_ = false;
  std::vector<double> wall_;
};

Tier agent_tier(TierMode m) { return m == TierMode::cloud ? Tier::cloud : Tier::local; }

std::string system_name(Tier t) { return t == Tier::cloud ? "agentic_cloud" : "agentic_local"; }

std::unique_ptr<reasoning::Backend> make_backend(const RunConfig& cfg) {
  switch (cfg.backend) {
    case BackendKind::scripted:
      return std::make_unique<reasoning::ScriptedBackend>(agent_tier(cfg.tier), cfg.seed);
    case BackendKind::remote: {
      auto transport = cfg.transport ? cfg.transport : reasoning::make_http_transport();
      return std::make_unique<reasoning::RemoteBackend>(cfg.remote, transport);
    }
    case BackendKind::replay:
      return std::make_unique<reasoning::ReplayBackend>(load_recorded_replies(*cfg.replay_log));
  }
  throw Error(ErrorCode::invalid_argument, "unknown backend");
}

double draw_rule_latency(Rng& rng) {
  const auto p = reasoning::TierProfile::for_tier(Tier::rule);
  double v = 0.0;
  for (int i = 0; i < 16 && v <= 0.0; ++i) v = rng.normal(p.latency_mean_s, p.latency_sd_s);
  return std::max(v, 0.0);
}

stats::RunLogRecord tier1_record(const perception::Frame& frame, const std::string& scene_id, Rng& latency) {
  stats::RunLogRecord r;
  r.system = "rule_based";
  r.scene_id = scene_id;
  r.processing_time = draw_rule_latency(latency);
  double sum = 0.0;
  for (const auto& d : frame.detections) {
    if (d.category != sim::Category::person) continue;
    ++r.persons_detected;
    sum += d.confidence;
  }
  if (r.persons_detected > 0) r.detection_confidence = sum / static_cast<double>(r.persons_detected);
  r.persons_present = frame.persons_visible;
  r.tier_source = "tier1";
  r.backend = "none";
  r.latency_emulated = true;
  return r;
}

stats::RunLogRecord tier2_record(const reasoning::AssessResult& ar, const reasoning::Classification& cls,
                                 const perception::Frame& frame, const std::string& scene_id, Tier tier,
                                 const std::string& backend, bool emulated) {
  stats::RunLogRecord r;
  r.system = system_name(tier);
  r.scene_id = scene_id;
  r.processing_time = ar.latency_s;
  double sum = 0.0;
  for (const auto& d : ar.response.detections) sum += d.confidence;
  r.persons_detected = ar.response.detections.size();
  if (!ar.response.detections.empty()) {
    r.detection_confidence = sum / static_cast<double>(ar.response.detections.size());
  }
  r.persons_present = frame.persons_visible;
  r.recommended_actions = ar.response.recommended_actions;
  r.surrounding_features = ar.response.surrounding_features;
  r.severity = reasoning::to_string(cls.severity);
  r.tier_source = "tier2";
  r.backend = backend;
  r.latency_emulated = emulated;
  return r;
}

std::string scene_tag(const std::string& name, std::uint64_t tick) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "@t%06llu", static_cast<unsigned long long>(tick));
  return name + buf;
}

void clear_artifacts(const fs::path& out) {
  for (const char* f : {"sim_events.jsonl", "mission_log.jsonl", "run_log.jsonl", "incidents.jsonl",
                        "tool_audit.jsonl", "manifest.json", "timing.json", "scenario.json"}) {
    fs::remove(out / f);
  }
  fs::remove_all(out / "outbox");
}

json artifact_entry(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();
  return json{{"bytes", data.size()}, {"fingerprint", text::fingerprint(data)}};
}

struct EmergencyContext {
  const RunConfig& cfg;
  const sim::ScenarioSpec& spec;
  sim::SimState& world;
  perception::PerceptionPipeline& perception;
  perception::Frame& frame;
  integration::ToolGateway& gateway;
  LoggedBackend& backend;
  MissionLog& log;
  MissionSummary& summary;
  std::vector<json>& outcomes_log;
  std::optional<integration::NetworkSimulator>& network;
  Clock::time_point detected_at;
};

std::size_t pick_executor(EmergencyContext& ec, const std::string& target_id) {
  if (ec.world.agents.size() < 2) return 0;
  const perception::WorldObject* target = ec.frame.world.find(target_id);
  if (target == nullptr) return 0;
  std::vector<integration::Bidder> bidders;
  for (const auto& a : ec.world.agents) {
    bidders.push_back({a.id, a.ego.pose.position, a.ego.battery_fraction, 10.0, true});
  }
  integration::A2aMessage cfp;
  cfp.msg_id = "cfp-" + target_id;
  cfp.conversation_id = "conv-" + target_id;
  cfp.performative = integration::A2aMessage::Performative::cfp;
  cfp.task = json{{"type", "rescue"}, {"target_id", target_id}, {"location", target->pose}};
  cfp.sender = ec.world.agents.front().id;
  const auto result = integration::run_task_auction(cfp, bidders, *ec.network, {}, ec.world.time);
  ec.log.write("auction", ec.world.tick,
               json{{"awarded", result.awarded},
                    {"winner", result.winner},
                    {"bids", result.bids},
                    {"excluded", result.excluded},
                    {"failure", result.failure}});
  if (!result.awarded) {
    ec.summary.warnings.push_back("auction for " + target_id + " failed (" + result.failure +
                                  "); lead agent responds");
    return 0;
  }
  for (std::size_t i = 0; i < ec.world.agents.size(); ++i) {
    if (ec.world.agents[i].id == result.winner) return i;
  }
  return 0;
}

// Plans, then executes steps in dependency order, reflecting on failures. Returns false
// when the mission aborted.
bool handle_emergency(EmergencyContext& ec, const std::string& target_id,
                      const std::vector<learning::ContextSnippet>& context) {
  const auto tools = ec.gateway.names();
  reasoning::Prompt prompt =
      reasoning::build_prompt(ec.frame.world, ec.spec.goal, context, ec.gateway.catalog());
  prompt.task = reasoning::PromptTask::plan;
  reasoning::ReactState state;
  state.max_replans = ec.cfg.max_replans;
  try {
    state.active_plan = reasoning::plan(ec.backend, prompt, tools, ec.cfg.backend_timeout_s).graph;
  } catch (const Error& e) {
    ec.log.write("plan_failed", ec.world.tick, json{{"target_id", target_id}, {"error", e.what()}});
    ec.summary.warnings.push_back(std::string("planning failed: ") + e.what());
    return true;
  }
  ec.log.write("plan", ec.world.tick, json{{"target_id", target_id}, {"graph", reasoning::to_json(*state.active_plan)}});

  action::ExecContext ctx;
  ctx.world = &ec.world;
  ctx.agent = pick_executor(ec, target_id);
  ctx.gateway = &ec.gateway;
  ctx.world_model = &ec.frame.world;
  ctx.envelope = action::SafetyEnvelope::from_scenario(ec.spec);
  ctx.dt = ec.spec.tick_dt;
  ctx.on_tick = [&ec](const sim::SimState& w) { ec.frame = ec.perception.process(w, 0); };

  action::OutcomeMap outcomes;
  auto abort_with = [&](reasoning::AbortReport report) {
    ec.log.write("abort", ec.world.tick, report.to_json());
    ec.summary.abort = std::move(report);
    return false;
  };

  while (true) {
    const auto& graph = *state.active_plan;
    bool restart = false;
    for (int id : reasoning::topological_order(graph)) {
      if (outcomes.count(id) != 0) continue;
      const reasoning::PlanStep& step = *graph.find(id);
      action::StepOutcome outcome;
      std::optional<int> blocked;
      if (const auto it = graph.dependencies.find(id); it != graph.dependencies.end()) {
        for (int dep : it->second) {
          const auto o = outcomes.find(dep);
          if (o == outcomes.end() || o->second.status != action::StepStatus::success) blocked = dep;
        }
      }
      if (blocked) {
        outcome.step_id = id;
        outcome.status = action::StepStatus::skipped;
        outcome.started = outcome.finished = ec.world.time;
        outcome.failure_reason = "dependency step " + std::to_string(*blocked) + " did not succeed";
      } else {
        outcome = action::execute_step(step, ctx, outcomes);
      }
      outcomes[id] = outcome;
      json entry = action::to_json(outcome);
      entry["plan_id"] = graph.plan_id;
      entry["action"] = reasoning::to_string(step.action);
      if (step.tool_name) entry["tool_name"] = *step.tool_name;
      entry["agent"] = ec.world.agents[ctx.agent].id;
      ec.outcomes_log.push_back(entry);
      ec.log.write("step", ec.world.tick, entry);

      if (outcome.status == action::StepStatus::success) {
        if (step.action == reasoning::ActionKind::land_and_deploy) ec.summary.land_and_deploy_executed = true;
        if (step.tool_name && *step.tool_name == "alert.dispatch") {
          ++ec.summary.alerts;
          if (!ec.summary.detection_to_outbox_wall_s) {
            ec.summary.detection_to_outbox_wall_s = seconds_since(ec.detected_at);
          }
        }
        continue;
      }
      if (blocked) continue;
      const std::string reason = outcome.failure_reason.value_or("step failed");
      switch (step.on_fail.value_or(reasoning::OnFail::trigger_reflection)) {
        case reasoning::OnFail::skip:
          continue;
        case reasoning::OnFail::abort:
          return abort_with({graph.plan_id, id, reason, state.replan_count, state.scratchpad});
        case reasoning::OnFail::trigger_reflection:
          break;
      }
      reasoning::Prompt rp =
          reasoning::build_prompt(ec.frame.world, ec.spec.goal, context, ec.gateway.catalog());
      try {
        const auto r = reasoning::reflect(state, ec.backend, rp, id, reason, tools, ec.cfg.backend_timeout_s);
        ec.log.write("reflection", ec.world.tick,
                     json{{"failed_step", id},
                          {"reason", reason},
                          {"replan_count", state.replan_count},
                          {"graph", reasoning::to_json(r.graph)}});
      } catch (const Error& e) {
        if (state.abort) return abort_with(*state.abort);
        return abort_with({graph.plan_id, id, reason + "; reflection failed: " + e.what(), state.replan_count,
                           state.scratchpad});
      }
      // Outcomes from the failed step onward belong to the old plan.
      outcomes.erase(outcomes.lower_bound(id), outcomes.end());
      restart = true;
      break;
    }
    if (!restart) return true;
  }
}

void seed_memory(const fs::path& source, const fs::path& dest, const std::vector<std::string>& ids) {
  if (ids.empty()) return;
  const learning::MemoryStore from(source);
  learning::MemoryStore to(dest);
  for (const auto& id : ids) {
    const auto rec = from.fetch(id);
    if (!rec) throw Error(ErrorCode::io_error, "memory record " + id + " missing from " + source.string());
    to.record(*rec);
  }
}

}  // namespace

const char* to_string(TierMode m) {
  switch (m) {
    case TierMode::rule_only: return "rule_only";
    case TierMode::local: return "local";
    case TierMode::cloud: return "cloud";
    case TierMode::hybrid: return "hybrid";
  }
  return "hybrid";
}

TierMode tier_mode_from_string(const std::string& s) {
  if (s == "rule_only" || s == "rule" || s == "rule_based") return TierMode::rule_only;
  if (s == "local" || s == "agentic_local") return TierMode::local;
  if (s == "cloud" || s == "agentic_cloud") return TierMode::cloud;
  if (s == "hybrid") return TierMode::hybrid;
  throw Error(ErrorCode::invalid_argument, "unknown tier mode '" + s + "'");
}

const char* to_string(BackendKind b) {
  switch (b) {
    case BackendKind::scripted: return "scripted";
    case BackendKind::remote: return "remote";
    case BackendKind::replay: return "replay";
  }
  return "scripted";
}

BackendKind backend_kind_from_string(const std::string& s) {
  if (s == "scripted") return BackendKind::scripted;
  if (s == "remote") return BackendKind::remote;
  if (s == "replay") return BackendKind::replay;
  throw Error(ErrorCode::invalid_argument, "unknown backend '" + s + "'");
}

void RunConfig::validate() const {
  if (scenario.empty()) throw Error(ErrorCode::invalid_argument, "scenario path is required");
  if (agents < 1) throw Error(ErrorCode::invalid_argument, "agent count must be >= 1");
  if (out_dir.empty()) throw Error(ErrorCode::invalid_argument, "output directory is required");
  if (assess_every_ticks == 0) throw Error(ErrorCode::invalid_argument, "assessment period must be >= 1 tick");
  if (!(backend_timeout_s > 0.0)) throw Error(ErrorCode::invalid_argument, "backend timeout must be positive");
  if (max_replans < 0) throw Error(ErrorCode::invalid_argument, "max_replans must be >= 0");
  network.validate();
  if (backend == BackendKind::remote && tier != TierMode::rule_only) remote.validate();
  if (backend == BackendKind::replay && !replay_log) {
    throw Error(ErrorCode::invalid_argument, "replay backend needs a mission log");
  }
}

json RunConfig::to_json() const {
  json j{{"scenario", scenario.string()},
         {"tier", mission::to_string(tier)},
         {"backend", mission::to_string(backend)},
         {"seed", seed},
         {"agents", agents},
         {"out_dir", out_dir.string()},
         {"network", {{"latency_s", network.latency_s}, {"jitter_s", network.jitter_s}, {"drop_prob", network.drop_prob}}},
         {"assess_every_ticks", assess_every_ticks},
         {"backend_timeout_s", backend_timeout_s},
         {"max_replans", max_replans}};
  j["memory_dir"] = memory_dir ? json(memory_dir->string()) : json(nullptr);
  if (backend == BackendKind::remote) {
    // The credential is never written out.
    j["remote"] = {{"base_url", remote.base_url}, {"model", remote.model}};
  }
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.scenario = field::get<std::string>(j, "scenario", "config");
  c.tier = tier_mode_from_string(field::get<std::string>(j, "tier", "config"));
  c.backend = backend_kind_from_string(field::get<std::string>(j, "backend", "config"));
  c.seed = field::get<std::uint64_t>(j, "seed", "config");
  c.agents = field::get<std::size_t>(j, "agents", "config");
  c.out_dir = field::get<std::string>(j, "out_dir", "config");
  if (j.contains("network")) {
    const json& n = j["network"];
    c.network.latency_s = field::get_or<double>(n, "latency_s", "config.network", c.network.latency_s);
    c.network.jitter_s = field::get_or<double>(n, "jitter_s", "config.network", c.network.jitter_s);
    c.network.drop_prob = field::get_or<double>(n, "drop_prob", "config.network", c.network.drop_prob);
  }
  c.assess_every_ticks = field::get_or<std::uint64_t>(j, "assess_every_ticks", "config", c.assess_every_ticks);
  c.backend_timeout_s = field::get_or<double>(j, "backend_timeout_s", "config", c.backend_timeout_s);
  c.max_replans = field::get_or<int>(j, "max_replans", "config", c.max_replans);
  if (j.contains("memory_dir") && !j["memory_dir"].is_null()) c.memory_dir = j["memory_dir"].get<std::string>();
  if (j.contains("remote")) {
    c.remote.base_url = field::get_or<std::string>(j["remote"], "base_url", "config.remote", "");
    c.remote.model = field::get_or<std::string>(j["remote"], "model", "config.remote", "");
  }
  return c;
}

json MissionSummary::to_json() const {
  json j{{"mission_id", mission_id},
         {"exit_code", exit_code},
         {"ticks", ticks},
         {"tier1_records", tier1_records},
         {"tier2_invocations", tier2_invocations},
         {"backend_calls", backend_calls},
         {"critical_events", critical_events},
         {"alerts", alerts},
         {"land_and_deploy_executed", land_and_deploy_executed},
         {"warnings", warnings}};
  j["abort"] = abort ? abort->to_json() : json(nullptr);
  return j;
}

bool should_escalate(const perception::WorldModel& world, const std::vector<std::string>& handled) {
  for (const auto& o : world.objects) {
    if (o.category != sim::Category::person) continue;
    if (std::find(handled.begin(), handled.end(), o.id) != handled.end()) continue;
    if (o.frames_stationary >= reasoning::kPersistenceFrames || world.has_relation(o.id, "isolated")) return true;
  }
  return false;
}

std::vector<reasoning::RecordedReply> load_recorded_replies(const fs::path& mission_log) {
  std::vector<reasoning::RecordedReply> out;
  for (const auto& j : read_jsonl(mission_log)) {
    if (j.value("type", "") != "exchange") continue;
    reasoning::RecordedReply r;
    r.task = field::get<std::string>(j, "task", "exchange");
    if (j.contains("error_code")) {
      r.error_code = error_code_from_string(field::get<std::string>(j, "error_code", "exchange"));
      r.error = field::get_or<std::string>(j, "error", "exchange", "");
    } else {
      r.text = field::get<std::string>(j, "text", "exchange");
      r.latency_s = field::get<double>(j, "latency_s", "exchange");
      r.latency_emulated = field::get<bool>(j, "latency_emulated", "exchange");
    }
    out.push_back(std::move(r));
  }
  return out;
}

MissionSummary run_mission(const RunConfig& cfg) {
  cfg.validate();
  const auto wall0 = Clock::now();
  const sim::ScenarioSpec spec = sim::load_scenario_file(cfg.scenario);

  const fs::path out = cfg.out_dir;
  fs::create_directories(out);
  clear_artifacts(out);
  fs::create_directories(out / "outbox");
  write_json_file(out / "scenario.json", sim::to_json(spec));
  const fs::path memory_dir = cfg.memory_dir.value_or(out / "memory");

  const RngStreams streams(cfg.seed);
  sim::SimState world = sim::make_initial_state(spec, cfg.agents);
  perception::PerceptionPipeline perception({}, streams.stream("detector"));
  Rng rule_latency = streams.stream("rule.latency");
  std::optional<integration::NetworkSimulator> network;
  if (cfg.agents > 1) network.emplace(cfg.network, streams.stream("network"));

  integration::ToolGateway gateway;
  gateway.attach_audit_sink(out / "tool_audit.jsonl");
  const auto services = integration::register_mock_tools(gateway, spec, out, world.agents.front().id);
  learning::MemoryStore memory(memory_dir);
  const auto memory_before = memory.mission_ids();

  MissionSummary summary;
  {
    char id[96];
    std::snprintf(id, sizeof id, "M-%s-s%llu-%s-%03zu", spec.name.c_str(), static_cast<unsigned long long>(cfg.seed),
                  to_string(cfg.tier), memory_before.size() + 1);
    summary.mission_id = id;
  }

  MissionLog log(out / "mission_log.jsonl");
  JsonlWriter run_log(out / "run_log.jsonl");
  log.write("mission_start", world.tick,
            json{{"format_version", kRunFormatVersion},
                 {"mission_id", summary.mission_id},
                 {"scenario", spec.name},
                 {"tier", to_string(cfg.tier)},
                 {"seed", cfg.seed},
                 {"agents", cfg.agents},
                 {"memory_before", memory_before}});

  std::unique_ptr<reasoning::Backend> inner;
  if (cfg.tier != TierMode::rule_only) inner = make_backend(cfg);
  std::optional<LoggedBackend> backend;
  if (inner) backend.emplace(*inner, log, world);
  const std::string backend_label = cfg.backend_label.value_or(inner ? inner->name() : "none");
  const Tier tier = agent_tier(cfg.tier);

  std::vector<std::string> handled;
  std::vector<json> snapshots;
  std::vector<json> responses;
  std::vector<json> outcomes_log;
  std::vector<double> tick_wall;
  perception::Frame frame;

  auto emit = [&](const stats::RunLogRecord& r) {
    summary.records.push_back(r);
    run_log.write(stats::to_json(r));
  };

  while (world.tick < spec.duration_ticks && !summary.abort) {
    const auto tick_start = Clock::now();
    world = sim::step(std::move(world), spec.tick_dt);
    frame = perception.process(world, 0);
    tick_wall.push_back(seconds_since(tick_start));
    if (world.tick % cfg.assess_every_ticks != 0) continue;

    const std::string scene_id = scene_tag(spec.name, world.tick);
    emit(tier1_record(frame, scene_id, rule_latency));
    ++summary.tier1_records;
    if (cfg.tier == TierMode::rule_only) continue;

    if (cfg.tier == TierMode::hybrid) {
      if (!should_escalate(frame.world, handled)) continue;
      json ids = json::array();
      for (const auto& o : frame.world.objects) {
        if (o.category == sim::Category::person &&
            (o.frames_stationary >= reasoning::kPersistenceFrames || frame.world.has_relation(o.id, "isolated"))) {
          ids.push_back(json{{"id", o.id},
                             {"pose", o.pose},
                             {"frames_stationary", o.frames_stationary},
                             {"isolated", frame.world.has_relation(o.id, "isolated")}});
        }
      }
      log.write("escalation", world.tick, json{{"objects", ids}});
    }
    ++summary.tier2_invocations;
    const auto detected_at = Clock::now();

    const auto context = memory.retrieve(spec.goal, kContextSnippets);
    json context_ids = json::array();
    for (const auto& c : context) context_ids.push_back(c.mission_id);
    const reasoning::Prompt prompt = reasoning::build_prompt(frame.world, spec.goal, context);
    reasoning::AssessResult ar;
    try {
      ar = reasoning::assess(*backend, prompt, cfg.backend_timeout_s);
    } catch (const Error& e) {
      log.write("assess_failed", world.tick, json{{"error", e.what()}});
      summary.warnings.push_back(std::string("assessment failed: ") + e.what());
      continue;
    }
    const auto cls = reasoning::classify_event(frame.world, ar.response);
    snapshots.push_back(perception::to_wire(frame.world));
    responses.push_back(reasoning::to_json(ar.response));
    log.write("assessment", world.tick,
              json{{"response", reasoning::to_json(ar.response)},
                   {"warnings", ar.warnings},
                   {"context", context_ids},
                   {"severity", reasoning::to_string(cls.severity)},
                   {"target_id", cls.target_id},
                   {"classification_warnings", cls.warnings}});
    emit(tier2_record(ar, cls, frame, scene_id, tier, backend_label, backend->last_emulated()));

    if (cls.severity != reasoning::Severity::critical) continue;
    if (std::find(handled.begin(), handled.end(), cls.target_id) != handled.end()) continue;
    handled.push_back(cls.target_id);
    ++summary.critical_events;
    EmergencyContext ec{cfg,     spec, world,        perception, frame,   gateway, *backend,
                        log,     summary, outcomes_log, network,    detected_at};
    handle_emergency(ec, cls.target_id, context);
  }

  summary.ticks = world.tick;
  summary.backend_calls = backend ? backend->calls() : 0;
  if (summary.abort) summary.exit_code = 2;
  log.write("mission_end", world.tick,
            json{{"critical_events", summary.critical_events},
                 {"alerts", summary.alerts},
                 {"tier2_invocations", summary.tier2_invocations},
                 {"aborted", summary.abort.has_value()}});
  run_log.flush();

  sim::write_event_log(out / "sim_events.jsonl", world.events);

  learning::MissionRecord record;
  record.mission_id = summary.mission_id;
  record.scenario = spec.name;
  record.snapshots = snapshots;
  record.step_outcomes = outcomes_log;
  record.responses = responses;
  record.created_at = world.time;
  memory.record(record);

  summary.total_wall_s = seconds_since(wall0);
  double tick_sum = 0.0;
  for (double t : tick_wall) tick_sum += t;
  json timing{{"total_wall_s", summary.total_wall_s},
              {"ticks", tick_wall.size()},
              {"tick_wall_mean_s", tick_wall.empty() ? 0.0 : tick_sum / static_cast<double>(tick_wall.size())},
              {"backend_wall_s", backend ? json(backend->wall_clock()) : json::array()}};
  timing["detection_to_outbox_wall_s"] =
      summary.detection_to_outbox_wall_s ? json(*summary.detection_to_outbox_wall_s) : json(nullptr);
  write_json_file(out / "timing.json", timing);

  const std::vector<std::string> required{"sim_events.jsonl", "mission_log.jsonl", "run_log.jsonl",
                                          "incidents.jsonl", "timing.json"};
  json artifacts = json::object();
  for (const auto& name : required) {
    if (!fs::exists(out / name)) {
      summary.exit_code = 3;
      summary.warnings.push_back("artifact missing: " + name);
      continue;
    }
    if (name != "timing.json") artifacts[name] = artifact_entry(out / name);
  }
  if (!fs::is_directory(out / "outbox")) {
    summary.exit_code = 3;
    summary.warnings.push_back("artifact missing: outbox/");
  }
  json outbox = json::array();
  std::vector<fs::path> alerts;
  for (const auto& e : fs::directory_iterator(out / "outbox")) alerts.push_back(e.path().filename());
  std::sort(alerts.begin(), alerts.end());
  for (const auto& a : alerts) outbox.push_back(a.string());
  artifacts["outbox"] = outbox;
  if (!memory.fetch(summary.mission_id)) {
    summary.exit_code = 3;
    summary.warnings.push_back("artifact missing: memory record");
  }
  artifacts["memory"] = {{"dir", memory_dir.string()}, {"mission_id", summary.mission_id}};
  (void)services;

  json manifest{{"format", kRunFormat},
                {"format_version", kRunFormatVersion},
                {"mission_id", summary.mission_id},
                {"config", cfg.to_json()},
                {"backend_label", backend_label},
                {"summary", summary.to_json()},
                {"artifacts", artifacts}};
  write_json_file(out / "manifest.json", manifest);
  return summary;
}

MissionSummary run_tiered(const RunConfig& config) {
  if (config.tier != TierMode::hybrid) throw Error(ErrorCode::invalid_argument, "run_tiered needs tier mode hybrid");
  return run_mission(config);
}

json ReplayResult::to_json() const {
  json d = json::array();
  for (const auto& v : divergences) {
    d.push_back(json{{"file", v.file}, {"line", v.line}, {"kind", v.kind}, {"detail", v.detail}});
  }
  return json{{"exchanges", exchanges}, {"divergences", d}, {"ok", ok()}};
}

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string line_kind(const std::string& line) {
  try {
    return json::parse(line).value("type", "record");
  } catch (const json::exception&) {
    return "unparseable";
  }
}

void compare_files(const fs::path& recorded, const fs::path& recomputed, const std::string& name,
                   std::vector<Divergence>& out) {
  const auto a = read_lines(recorded);
  const auto b = fs::exists(recomputed) ? read_lines(recomputed) : std::vector<std::string>{};
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= a.size()) {
      out.push_back({name, i + 1, "extra", "recomputed " + line_kind(b[i]) + " has no recorded counterpart"});
    } else if (i >= b.size()) {
      out.push_back({name, i + 1, "missing", "recorded " + line_kind(a[i]) + " was not reproduced"});
    } else if (a[i] != b[i]) {
      out.push_back({name, i + 1, "mismatch", "recorded " + line_kind(a[i]) + " differs from recomputation"});
    }
  }
}

}  // namespace

ReplayResult replay(const fs::path& run_dir, const fs::path& out_dir) {
  for (const char* f : {"manifest.json", "mission_log.jsonl", "run_log.jsonl", "scenario.json"}) {
    if (!fs::exists(run_dir / f)) throw Error(ErrorCode::io_error, std::string("run directory lacks ") + f);
  }
  const json manifest = read_json_file(run_dir / "manifest.json");
  if (manifest.value("format", "") != kRunFormat || manifest.value("format_version", 0) != kRunFormatVersion) {
    throw Error(ErrorCode::version_mismatch, "unsupported run format in " + (run_dir / "manifest.json").string());
  }
  if (fs::weakly_canonical(run_dir) == fs::weakly_canonical(out_dir)) {
    throw Error(ErrorCode::invalid_argument, "replay output must differ from the run directory");
  }

  ReplayResult result;
  // Digest chain over the recorded exchanges.
  const auto lines = read_lines(run_dir / "mission_log.jsonl");
  std::string digest;
  std::vector<std::string> memory_before;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::exception& e) {
      result.divergences.push_back({"mission_log.jsonl", i + 1, "digest", std::string("unparseable: ") + e.what()});
      continue;
    }
    const std::string type = j.value("type", "");
    if (type == "mission_start") memory_before = j.value("memory_before", std::vector<std::string>{});
    if (type != "exchange") continue;
    ++result.exchanges;
    const std::string task = j.value("task", "");
    const std::string body = j.contains("error_code") ? "error:" + j.value("error", std::string()) : j.value("text", "");
    digest = chain_digest(digest, task, body);
    if (j.value("digest", "") != digest) {
      result.divergences.push_back({"mission_log.jsonl", i + 1, "digest",
                                    "exchange " + std::to_string(result.exchanges) + " (" + task +
                                        ") does not match its recorded digest"});
      // Continue the chain from the recorded value so one edit is reported once.
      digest = j.value("digest", "");
    }
  }

  RunConfig cfg = RunConfig::from_json(manifest.at("config"));
  cfg.scenario = run_dir / "scenario.json";
  cfg.out_dir = out_dir;
  cfg.backend_label = manifest.value("backend_label", std::string(to_string(cfg.backend)));
  const fs::path original_memory = cfg.memory_dir.value_or(run_dir / "memory");
  cfg.backend = BackendKind::replay;
  cfg.replay_log = run_dir / "mission_log.jsonl";
  cfg.memory_dir = out_dir / "memory";
  cfg.transport.reset();

  fs::create_directories(out_dir);
  fs::remove_all(out_dir / "memory");
  try {
    seed_memory(original_memory, out_dir / "memory", memory_before);
    run_mission(cfg);
  } catch (const Error& e) {
    result.divergences.push_back({"mission_log.jsonl", 0, "replay_error", e.what()});
  }
  compare_files(run_dir / "mission_log.jsonl", out_dir / "mission_log.jsonl", "mission_log.jsonl",
                result.divergences);
  compare_files(run_dir / "run_log.jsonl", out_dir / "run_log.jsonl", "run_log.jsonl", result.divergences);
  return result;
}

ComparisonResult run_comparison(const ComparisonConfig& config) {
  if (config.scenes < 44) {
    throw Error(ErrorCode::invalid_argument, "comparison needs a pool of at least 44 scenes");
  }
  ScenePoolParams pp;
  pp.scenes = config.scenes;
  pp.emergency_rate = config.emergency_rate;
  const auto pool = generate_scene_pool(config.seed, pp);

  const RngStreams streams(config.seed);
  Rng rule_latency = streams.stream("pool.rule.latency");
  reasoning::ScriptedBackend local(Tier::local, config.seed);
  reasoning::ScriptedBackend cloud(Tier::cloud, config.seed);

  ComparisonResult result;
  for (const auto& spec : pool) {
    sim::SimState world = sim::make_initial_state(spec, 1);
    perception::PerceptionPipeline perception({}, streams.stream("pool.detector." + spec.name));
    perception::Frame frame;
    while (world.tick < spec.duration_ticks) {
      world = sim::step(std::move(world), spec.tick_dt);
      frame = perception.process(world, 0);
    }
    result.rule_based.push_back(tier1_record(frame, spec.name, rule_latency));
    const auto prompt = reasoning::build_prompt(frame.world, spec.goal, {});
    for (auto* b : {&local, &cloud}) {
      const auto ar = reasoning::assess(*b, prompt, config.backend_timeout_s);
      const auto cls = reasoning::classify_event(frame.world, ar.response);
      auto rec = tier2_record(ar, cls, frame, spec.name, b->tier(), b->name(), true);
      (b == &local ? result.agentic_local : result.agentic_cloud).push_back(std::move(rec));
    }
  }

  std::vector<stats::RunLogRecord> all = result.rule_based;
  all.insert(all.end(), result.agentic_local.begin(), result.agentic_local.end());
  all.insert(all.end(), result.agentic_cloud.begin(), result.agentic_cloud.end());
  result.report = stats::generate_report(all);

  const fs::path out = config.out_dir;
  fs::create_directories(out);
  stats::write_run_log(out / "run_log_rule_based.jsonl", result.rule_based);
  stats::write_run_log(out / "run_log_agentic_local.jsonl", result.agentic_local);
  stats::write_run_log(out / "run_log_agentic_cloud.jsonl", result.agentic_cloud);
  stats::write_run_log(out / "run_log.jsonl", all);
  write_file_atomic(out / "report.txt", stats::render_text(result.report));
  write_file_atomic(out / "report.csv", stats::render_csv(result.report));
  write_json_file(out / "report.json", stats::to_json(result.report));
  json scenes = json::array();
  for (const auto& s : pool) scenes.push_back(json{{"name", s.name}, {"emergency", is_emergency_scene(s)}});
  write_json_file(out / "manifest.json",
                  json{{"format", "auav-comparison"},
                       {"format_version", kRunFormatVersion},
                       {"seed", config.seed},
                       {"scenes", scenes},
                       {"artifacts",
                        {"run_log_rule_based.jsonl", "run_log_agentic_local.jsonl", "run_log_agentic_cloud.jsonl",
                         "run_log.jsonl", "report.txt", "report.csv", "report.json"}}});
  return result;
}

}  // namespace auav::mission
