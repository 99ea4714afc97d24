#include "auav/action/executor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "auav/common/error.hpp"

namespace auav::action {

using reasoning::ActionKind;
using reasoning::PlanStep;

const char* to_string(StepStatus s) {
  switch (s) {
    case StepStatus::success: return "success";
    case StepStatus::failed: return "failed";
    case StepStatus::skipped: return "skipped";
  }
  return "?";
}

nlohmann::json to_json(const StepOutcome& o) {
  nlohmann::json j = {{"step_id", o.step_id},
                      {"status", to_string(o.status)},
                      {"outputs", o.outputs},
                      {"started", o.started},
                      {"finished", o.finished}};
  if (o.failure_reason) j["failure_reason"] = *o.failure_reason;
  return j;
}

nlohmann::json to_json(const SafetyViolation& v) {
  return {{"type", v.type}, {"measured", v.measured}, {"limit", v.limit}, {"agent", v.agent}};
}

void SafetyEnvelope::validate() const {
  if (!geofence.well_formed()) throw Error(ErrorCode::invalid_argument, "envelope geofence is malformed");
  if (!(min_altitude < max_altitude)) {
    throw Error(ErrorCode::invalid_argument, "envelope min_altitude must be below max_altitude");
  }
  if (!(max_speed > 0.0)) throw Error(ErrorCode::invalid_argument, "envelope max_speed must be positive");
  if (!(min_battery >= 0.0 && min_battery < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "envelope min_battery must be in [0,1)");
  }
}

SafetyEnvelope SafetyEnvelope::from_scenario(const sim::ScenarioSpec& spec) {
  SafetyEnvelope e;
  e.geofence = spec.geofence;
  e.max_speed = spec.ego.max_speed;
  e.min_altitude = std::max(e.min_altitude, spec.geofence.min.z);
  e.max_altitude = std::min(e.max_altitude, spec.geofence.max.z);
  if (e.min_altitude >= e.max_altitude) e.min_altitude = spec.geofence.min.z;
  e.validate();
  return e;
}

std::vector<SafetyViolation> monitor_safety(const sim::SimState& world, const SafetyEnvelope& envelope) {
  std::vector<SafetyViolation> out;
  for (const auto& a : world.agents) {
    const auto& p = a.ego.pose.position;
    if (!envelope.geofence.contains(p)) {
      const Vec3 c = envelope.geofence.clamp(p, 0.0);
      out.push_back({"geofence", distance(p, c), 0.0, a.id});
    }
    if (p.z > envelope.max_altitude) out.push_back({"altitude", p.z, envelope.max_altitude, a.id});
    if (!a.ego.landed && !a.descending && p.z < envelope.min_altitude) {
      out.push_back({"altitude", p.z, envelope.min_altitude, a.id});
    }
    const double speed = a.ego.velocity.norm();
    if (speed > envelope.max_speed * (1.0 + 1e-9)) out.push_back({"speed", speed, envelope.max_speed, a.id});
    if (!a.ego.landed && a.ego.battery_fraction < envelope.min_battery) {
      out.push_back({"battery", a.ego.battery_fraction, envelope.min_battery, a.id});
    }
  }
  return out;
}

reasoning::EvalResult check_preconditions(const PlanStep& step, const OutcomeMap& outcomes) {
  std::vector<reasoning::Precondition> parsed;
  parsed.reserve(step.preconditions.size());
  for (const auto& text : step.preconditions) parsed.push_back(reasoning::parse_precondition(text));
  return reasoning::evaluate_all(parsed, [&](int id) -> const nlohmann::json* {
    auto it = outcomes.find(id);
    if (it == outcomes.end() || it->second.status != StepStatus::success) return nullptr;
    return &it->second.outputs;
  });
}

std::vector<Segment> plan_trajectory(const Pose3& from, const Pose3& to, const SafetyEnvelope& envelope,
                                     double speed) {
  if (!envelope.geofence.contains(from.position)) {
    throw Error(ErrorCode::infeasible, "trajectory start outside geofence");
  }
  if (!envelope.geofence.contains(to.position)) {
    throw Error(ErrorCode::infeasible, "trajectory end outside geofence");
  }
  if (to.position.z > envelope.max_altitude || to.position.z < envelope.min_altitude) {
    std::ostringstream msg;
    msg << "target altitude " << to.position.z << " m outside [" << envelope.min_altitude << ", "
        << envelope.max_altitude << "]";
    throw Error(ErrorCode::infeasible, msg.str());
  }
  const double d = distance(from.position, to.position);
  if (d == 0.0) return {};
  const double v = speed > 0.0 ? std::min(speed, envelope.max_speed) : envelope.max_speed;
  return {Segment{from.position, to.position, v, d / v}};
}

Vec3 resolve_target(const nlohmann::json& args, const perception::WorldModel* world_model,
                    const sim::SimState& world) {
  if (args.contains("position")) {
    try {
      return args.at("position").get<Vec3>();
    } catch (const std::exception& e) {
      throw Error(ErrorCode::invalid_argument, std::string("bad position arg: ") + e.what());
    }
  }
  if (!args.contains("target_id") || !args.at("target_id").is_string()) {
    throw Error(ErrorCode::invalid_argument, "step needs target_id or position");
  }
  const std::string id = args.at("target_id").get<std::string>();
  if (world_model != nullptr) {
    if (const auto* o = world_model->find(id)) return o->pose;
  }
  if (const auto* e = world.find_entity(id); e != nullptr && e->category == sim::Category::landmark) {
    return e->pose.position;
  }
  throw Error(ErrorCode::not_found, "unknown target '" + id + "'");
}

namespace {

StepOutcome failed(StepOutcome o, std::string reason, double now) {
  o.status = StepStatus::failed;
  o.failure_reason = std::move(reason);
  o.finished = now;
  return o;
}

std::string describe(const SafetyViolation& v) {
  std::ostringstream s;
  s << "safety: " << v.type << " measured " << v.measured << " limit " << v.limit;
  return s.str();
}

// Ticks the simulator until the agent's trajectory is done. Returns a failure reason
// or an empty string.
std::string fly(ExecContext& ctx) {
  auto& world = *ctx.world;
  std::uint64_t ticks = 0;
  while (sim::trajectory_active(world, ctx.agent)) {
    if (++ticks > ctx.max_ticks) {
      world.agents[ctx.agent].legs.clear();
      world.agents[ctx.agent].loiter_remaining = 0.0;
      return "timeout: step exceeded " + std::to_string(ctx.max_ticks) + " ticks";
    }
    world = sim::step(std::move(world), ctx.dt);
    if (ctx.on_tick) ctx.on_tick(world);
    const auto& id = world.agents[ctx.agent].id;
    for (const auto& v : monitor_safety(world, ctx.envelope)) {
      if (v.agent != id) continue;
      auto& a = world.agents[ctx.agent];
      a.legs.clear();
      a.loiter_remaining = 0.0;
      a.descending = false;
      return describe(v);
    }
  }
  return "";
}

}  // namespace

StepOutcome execute_step(const PlanStep& step, ExecContext& ctx, const OutcomeMap& outcomes) {
  if (ctx.world == nullptr) throw Error(ErrorCode::invalid_argument, "execute_step needs a world");
  auto& world = *ctx.world;
  StepOutcome out;
  out.step_id = step.step_id;
  out.started = world.time;
  out.finished = world.time;

  try {
    const auto gate = check_preconditions(step, outcomes);
    if (!gate.value) {
      std::string reason = "precondition false";
      if (!gate.diagnostic.empty()) reason += ": " + gate.diagnostic;
      return failed(out, reason, world.time);
    }
  } catch (const Error& e) {
    return failed(out, std::string("precondition error: ") + e.what(), world.time);
  }
  if (ctx.on_gate_passed) ctx.on_gate_passed(step);

  try {
    switch (step.action) {
      case ActionKind::call_tool: {
        if (ctx.gateway == nullptr) return failed(out, "tool: no gateway", world.time);
        integration::ToolCallEnvelope env;
        env.call_id = ctx.gateway->next_call_id();
        env.tool_name = step.tool_name.value_or("");
        env.args = step.args;
        env.issued_by = world.agents.at(ctx.agent).id;
        env.issued_at = world.time;
        env.context_scope = step.context_scope;
        const nlohmann::json context =
            ctx.world_model != nullptr ? perception::to_wire(*ctx.world_model) : nlohmann::json::object();
        const auto result = ctx.gateway->call(env, context);
        if (!result.ok()) {
          return failed(out,
                        "tool " + std::string(to_string(result.error_code.value_or(ErrorCode::tool_failure))) +
                            ": " + result.error_detail.value_or(""),
                        world.time);
        }
        out.outputs = result.outputs;
        out.outputs["call_id"] = env.call_id;
        break;
      }
      case ActionKind::fly_to: {
        const Vec3 here = world.ego(ctx.agent).pose.position;
        Vec3 target = resolve_target(step.args, ctx.world_model, world);
        target.z = step.args.value("altitude", here.z);
        if (step.args.value("clamp_to_geofence", false)) target = ctx.envelope.geofence.clamp(target, 1.0);
        if (!ctx.envelope.geofence.contains(target)) {
          return failed(out, "geofence: target outside geofence", world.time);
        }
        const auto segments =
            plan_trajectory(world.ego(ctx.agent).pose, Pose3{target, 0.0}, ctx.envelope,
                            step.args.value("speed", ctx.cruise_speed));
        const double speed = segments.empty() ? ctx.cruise_speed : segments.front().speed;
        const auto ack = sim::apply_command(world, ctx.agent, sim::FlightCommand::fly_to(target, speed));
        if (!ack.accepted) return failed(out, ack.reason, world.time);
        if (auto reason = fly(ctx); !reason.empty()) return failed(out, reason, world.time);
        out.outputs = {{"arrived", true},
                       {"position", world.ego(ctx.agent).pose.position},
                       {"distance_m", distance(here, target)}};
        break;
      }
      case ActionKind::land_and_deploy: {
        Vec3 target = resolve_target(step.args, ctx.world_model, world);
        target.z = world.ego(ctx.agent).pose.position.z;
        if (step.args.value("clamp_to_geofence", false)) target = ctx.envelope.geofence.clamp(target, 1.0);
        if (!ctx.envelope.geofence.contains(target)) {
          return failed(out, "geofence: target outside geofence", world.time);
        }
        const std::size_t first_event = world.events.size();
        const auto ack = sim::apply_command(
            world, ctx.agent, sim::FlightCommand::land_and_deploy(target, ctx.cruise_speed));
        if (!ack.accepted) return failed(out, ack.reason, world.time);
        if (auto reason = fly(ctx); !reason.empty()) return failed(out, reason, world.time);
        bool deployed = false;
        for (std::size_t i = first_event; i < world.events.size(); ++i) {
          if (world.events[i].type == "rescue_kit_deployed") deployed = true;
        }
        if (!deployed) return failed(out, "deploy: rescue kit not released", world.time);
        out.outputs = {{"landed", true},
                       {"deployed", true},
                       {"position", world.ego(ctx.agent).pose.position}};
        break;
      }
      case ActionKind::loiter: {
        const double seconds = step.args.value("duration_s", 0.0);
        const auto ack = sim::apply_command(world, ctx.agent, sim::FlightCommand::loiter(seconds));
        if (!ack.accepted) return failed(out, ack.reason, world.time);
        if (auto reason = fly(ctx); !reason.empty()) return failed(out, reason, world.time);
        out.outputs = {{"loitered_s", seconds}};
        break;
      }
      case ActionKind::report:
        out.outputs = {{"message", step.args.value("message", "")}};
        break;
    }
  } catch (const Error& e) {
    return failed(out, std::string(to_string(e.code())) + ": " + e.what(), world.time);
  } catch (const std::exception& e) {
    return failed(out, std::string("error: ") + e.what(), world.time);
  }
  out.finished = world.time;
  return out;
}

}  // namespace auav::action
