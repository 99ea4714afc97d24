#include "auav/sim/world.hpp"

#include <algorithm>
#include <cmath>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"

namespace auav::sim {

namespace {

constexpr double kArrivalEps = 1e-9;
// Extra agents start on a line along +x from the first one.
constexpr double kAgentSpacing = 15.0;

void emit(SimState& w, std::string type, json payload) {
  w.events.push_back(SimEvent{w.tick, w.time, std::move(type), std::move(payload)});
}

// Moves `pos` toward `target` by at most `budget` meters. Returns meters actually moved.
double advance_toward(Vec3& pos, const Vec3& target, double budget) {
  const Vec3 delta = target - pos;
  const double dist = delta.norm();
  if (dist <= budget + kArrivalEps) {
    pos = target;
    return dist;
  }
  pos += delta * (budget / dist);
  return budget;
}

void step_entity(EntityState& e, SimState& w, double dt, std::uint64_t next_tick) {
  switch (e.behavior.kind) {
    case Behavior::Kind::stationary:
      e.velocity = {};
      break;
    case Behavior::Kind::waypoint_walk: {
      const Vec3 start = e.pose.position;
      double budget = e.behavior.speed * dt;
      const auto& wps = e.behavior.waypoints;
      while (budget > 0.0 && e.waypoint_index < wps.size()) {
        budget -= advance_toward(e.pose.position, wps[e.waypoint_index], budget);
        if (distance(e.pose.position, wps[e.waypoint_index]) <= kArrivalEps) {
          ++e.waypoint_index;
          if (e.waypoint_index == wps.size() && e.behavior.loop) e.waypoint_index = 0;
          if (wps.size() == 1 && e.behavior.loop) break;
        }
      }
      e.velocity = (e.pose.position - start) * (1.0 / dt);
      break;
    }
    case Behavior::Kind::collapse_at_tick:
      if (!e.collapsed) {
        e.pose.position += e.velocity * dt;
        if (next_tick >= e.behavior.collapse_tick) {
          e.collapsed = true;
          e.velocity = {};
          // Reported at the tick it takes effect.
          w.events.push_back(SimEvent{next_tick, w.time + dt, "entity_collapsed",
                                      json{{"entity", e.id}, {"position", e.pose.position}}});
        }
      }
      break;
  }
}

void step_agent(Agent& a, const ScenarioSpec& spec, SimState& w, double dt) {
  EgoState& ego = a.ego;
  const Vec3 start = ego.pose.position;

  if (a.loiter_remaining > 0.0) {
    a.loiter_remaining = std::max(0.0, a.loiter_remaining - dt);
    if (a.loiter_remaining == 0.0) emit(w, "loiter_complete", json{{"agent", a.id}});
  } else {
    double budget_time = dt;
    while (budget_time > 0.0 && !a.legs.empty()) {
      TrajectoryLeg& leg = a.legs.front();
      const double speed = std::min(leg.speed, leg.descent ? spec.ego.descent_speed : spec.ego.max_speed);
      const double moved = advance_toward(ego.pose.position, leg.target, speed * budget_time);
      budget_time -= speed > 0.0 ? moved / speed : budget_time;
      if (distance(ego.pose.position, leg.target) > kArrivalEps) break;
      const TrajectoryLeg done = leg;
      a.legs.pop_front();
      if (done.descent) {
        a.descending = false;
        ego.landed = true;
        emit(w, "landed", json{{"agent", a.id}, {"position", ego.pose.position}});
        if (done.deploy_on_arrival) {
          emit(w, "rescue_kit_deployed", json{{"agent", a.id}, {"position", ego.pose.position}});
        }
      }
      if (a.legs.empty()) emit(w, "trajectory_complete", json{{"agent", a.id}, {"position", ego.pose.position}});
    }
  }

  ego.velocity = (ego.pose.position - start) * (1.0 / dt);
  if (!ego.landed) {
    ego.battery_fraction = std::max(0.0, ego.battery_fraction - spec.ego.battery_drain_per_s * dt);
  }
  if (!spec.geofence.contains(ego.pose.position)) {
    emit(w, "safety_violation",
         json{{"agent", a.id}, {"type", "geofence"}, {"position", ego.pose.position}});
  }
}

}  // namespace

const EntityState* SimState::find_entity(std::string_view id) const {
  for (const auto& e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

SimState make_initial_state(ScenarioSpec spec, std::size_t agent_count) {
  validate(spec);
  if (agent_count == 0) throw Error(ErrorCode::invalid_argument, "agent count must be >= 1");
  SimState w;
  for (const auto& es : spec.entities) {
    EntityState e;
    e.id = es.id;
    e.category = es.category;
    e.pose = es.pose;
    e.velocity = es.velocity;
    e.behavior = es.behavior;
    if (es.behavior.kind == Behavior::Kind::collapse_at_tick && es.behavior.collapse_tick == 0) {
      e.collapsed = true;
      e.velocity = {};
    }
    if (es.behavior.kind == Behavior::Kind::stationary) e.velocity = {};
    w.entities.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < agent_count; ++i) {
    Agent a;
    a.id = "uav-" + std::to_string(i + 1);
    a.ego.pose = spec.ego_start;
    a.ego.pose.position.x += kAgentSpacing * static_cast<double>(i);
    a.ego.pose.position = spec.geofence.clamp(a.ego.pose.position);
    a.ego.battery_fraction = spec.ego.battery;
    a.ego.landed = false;
    w.agents.push_back(std::move(a));
  }
  w.spec = std::make_shared<const ScenarioSpec>(std::move(spec));
  emit(w, "scenario_loaded",
       json{{"name", w.spec->name}, {"agents", agent_count}, {"entities", w.entities.size()}});
  return w;
}

SimState step(SimState world, double dt) {
  if (dt < 0.0) throw Error(ErrorCode::invalid_argument, "dt must be >= 0");
  if (dt == 0.0) return world;
  const std::uint64_t next_tick = world.tick + 1;
  for (auto& e : world.entities) step_entity(e, world, dt, next_tick);
  world.tick = next_tick;
  world.time += dt;
  for (auto& a : world.agents) step_agent(a, *world.spec, world, dt);
  return world;
}

FlightCommand FlightCommand::fly_to(Vec3 target, double speed) {
  FlightCommand c;
  c.kind = Kind::fly_to;
  c.target = target;
  c.speed = speed;
  return c;
}

FlightCommand FlightCommand::land() {
  FlightCommand c;
  c.kind = Kind::land;
  return c;
}

FlightCommand FlightCommand::land_and_deploy(std::optional<Vec3> target, double speed) {
  FlightCommand c;
  c.kind = Kind::land_and_deploy;
  c.target = target;
  c.speed = speed;
  return c;
}

FlightCommand FlightCommand::loiter(double duration_s) {
  FlightCommand c;
  c.kind = Kind::loiter;
  c.duration_s = duration_s;
  return c;
}

std::string_view to_string(FlightCommand::Kind k) {
  switch (k) {
    case FlightCommand::Kind::fly_to: return "fly_to";
    case FlightCommand::Kind::land: return "land";
    case FlightCommand::Kind::land_and_deploy: return "land_and_deploy";
    case FlightCommand::Kind::loiter: return "loiter";
  }
  return "loiter";
}

CommandAck apply_command(SimState& world, std::size_t agent_index, const FlightCommand& cmd) {
  if (agent_index >= world.agents.size()) return {false, false, "unknown agent"};
  const ScenarioSpec& spec = *world.spec;
  Agent& a = world.agents[agent_index];
  const auto reject = [&](std::string reason) {
    emit(world, "command_rejected",
         json{{"agent", a.id}, {"command", to_string(cmd.kind)}, {"reason", reason}});
    return CommandAck{false, false, std::move(reason)};
  };

  const double speed = cmd.speed > 0.0 ? std::min(cmd.speed, spec.ego.max_speed) : spec.ego.max_speed;
  std::deque<TrajectoryLeg> legs;
  double loiter = 0.0;
  const Vec3 here = a.ego.pose.position;

  switch (cmd.kind) {
    case FlightCommand::Kind::fly_to:
      if (!cmd.target) return reject("malformed");
      if (!spec.geofence.contains(*cmd.target)) return reject("geofence");
      if (distance(*cmd.target, here) > kArrivalEps) legs.push_back({*cmd.target, speed, false, false});
      break;
    case FlightCommand::Kind::land:
    case FlightCommand::Kind::land_and_deploy: {
      const bool deploy = cmd.kind == FlightCommand::Kind::land_and_deploy;
      Vec3 touchdown = here;
      if (cmd.target) {
        const Vec3 above{cmd.target->x, cmd.target->y, here.z};
        if (!spec.geofence.contains(above)) return reject("geofence");
        if (distance(above, here) > kArrivalEps) legs.push_back({above, speed, false, false});
        touchdown = above;
      }
      touchdown.z = spec.geofence.min.z;
      legs.push_back({touchdown, spec.ego.descent_speed, true, deploy});
      break;
    }
    case FlightCommand::Kind::loiter:
      if (cmd.duration_s < 0.0) return reject("malformed");
      loiter = cmd.duration_s;
      break;
  }

  a.legs = std::move(legs);
  a.loiter_remaining = loiter;
  a.descending = !a.legs.empty() && a.legs.back().descent;
  if (!a.legs.empty() && !a.legs.front().descent) a.ego.landed = false;

  json payload{{"agent", a.id}, {"command", to_string(cmd.kind)}};
  if (cmd.target) payload["target"] = *cmd.target;
  if (cmd.kind == FlightCommand::Kind::loiter) payload["duration_s"] = cmd.duration_s;
  emit(world, "command_accepted", std::move(payload));

  const bool complete = a.legs.empty() && a.loiter_remaining == 0.0;
  if (complete && cmd.kind == FlightCommand::Kind::fly_to) {
    emit(world, "trajectory_complete", json{{"agent", a.id}, {"position", here}});
  }
  return CommandAck{true, complete, ""};
}

bool trajectory_active(const SimState& world, std::size_t agent) {
  const Agent& a = world.agents.at(agent);
  return !a.legs.empty() || a.loiter_remaining > 0.0;
}

bool SensorFrustum::contains(const Vec3& p) const {
  const double depth = apex.z - p.z;
  if (depth < 0.0 || depth > far) return false;
  return std::abs(p.x - apex.x) <= slope_x * depth && std::abs(p.y - apex.y) <= slope_y * depth;
}

SensorFrustum SensorFrustum::downward(const Vec3& camera, double half_fov_rad, double far) {
  const double slope = std::tan(half_fov_rad);
  return SensorFrustum{camera, slope, slope, far};
}

std::vector<VisibleEntity> visible_entities(const SimState& world, const SensorFrustum& fov) {
  std::vector<VisibleEntity> out;
  for (const auto& e : world.entities) {
    if (fov.contains(e.pose.position)) out.push_back({e, distance(e.pose.position, fov.apex)});
  }
  std::sort(out.begin(), out.end(), [](const VisibleEntity& a, const VisibleEntity& b) {
    if (a.range != b.range) return a.range < b.range;
    return a.entity.id < b.entity.id;
  });
  return out;
}

nlohmann::json to_json(const SimEvent& e) {
  return json{{"tick", e.tick}, {"time", e.time}, {"type", e.type}, {"payload", e.payload}};
}

void write_event_log(const std::filesystem::path& path, const std::vector<SimEvent>& events) {
  JsonlWriter out(path);
  for (const auto& e : events) out.write(to_json(e));
}

}  // namespace auav::sim
