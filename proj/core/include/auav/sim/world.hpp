#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/sim/scenario.hpp"

namespace auav::sim {

struct EntityState {
  std::string id;
  Category category = Category::person;
  Pose3 pose;
  Vec3 velocity;
  Behavior behavior;
  bool collapsed = false;
  std::size_t waypoint_index = 0;
};

struct EgoState {
  Pose3 pose;
  Vec3 velocity;
  double battery_fraction = 1.0;
  bool landed = false;
};

struct TrajectoryLeg {
  Vec3 target;
  double speed = 0.0;
  bool descent = false;
  bool deploy_on_arrival = false;
};

struct Agent {
  std::string id;
  EgoState ego;
  std::deque<TrajectoryLeg> legs;
  double loiter_remaining = 0.0;
  bool descending = false;
};

struct SimEvent {
  std::uint64_t tick = 0;
  double time = 0.0;
  std::string type;
  nlohmann::json payload = nlohmann::json::object();
};

// Value snapshot of the simulated world. Treat as immutable between ticks.
struct SimState {
  std::shared_ptr<const ScenarioSpec> spec;
  std::uint64_t tick = 0;
  double time = 0.0;
  std::vector<EntityState> entities;
  std::vector<Agent> agents;
  std::vector<SimEvent> events;

  const EgoState& ego(std::size_t agent = 0) const { return agents.at(agent).ego; }
  const EntityState* find_entity(std::string_view id) const;
};

SimState make_initial_state(ScenarioSpec spec, std::size_t agent_count = 1);

// Advances entities, agents and the clock by dt. dt == 0 is the identity.
SimState step(SimState world, double dt);

struct FlightCommand {
  enum class Kind { fly_to, land, land_and_deploy, loiter };

  Kind kind = Kind::loiter;
  std::optional<Vec3> target;  // fly_to (required), land_and_deploy (optional)
  double speed = 0.0;          // m/s; 0 = airframe max
  double duration_s = 0.0;     // loiter

  static FlightCommand fly_to(Vec3 target, double speed);
  static FlightCommand land();
  static FlightCommand land_and_deploy(std::optional<Vec3> target = std::nullopt, double speed = 0.0);
  static FlightCommand loiter(double duration_s);
};

std::string_view to_string(FlightCommand::Kind k);

struct CommandAck {
  bool accepted = false;
  bool complete = false;  // nothing left to fly
  std::string reason;     // set on rejection ("geofence", "malformed")
};

// Installs a trajectory for the given agent. Targets outside the geofence are
// rejected and leave the state untouched.
CommandAck apply_command(SimState& world, std::size_t agent, const FlightCommand& cmd);

bool trajectory_active(const SimState& world, std::size_t agent);

// Downward-looking pyramid with apex at the camera. Slopes are tan(half-angle).
// Closed: points on a boundary plane count as inside.
struct SensorFrustum {
  Vec3 apex;
  double slope_x = 1.0;
  double slope_y = 1.0;
  double far = 60.0;  // depth below apex

  bool well_formed() const { return slope_x >= 0.0 && slope_y >= 0.0 && far > 0.0; }
  bool contains(const Vec3& p) const;

  static SensorFrustum downward(const Vec3& camera, double half_fov_rad, double far);
};

struct VisibleEntity {
  EntityState entity;
  double range = 0.0;
};

// Entities inside the frustum sorted by (range, id).
std::vector<VisibleEntity> visible_entities(const SimState& world, const SensorFrustum& fov);

nlohmann::json to_json(const SimEvent& e);
void write_event_log(const std::filesystem::path& path, const std::vector<SimEvent>& events);

}  // namespace auav::sim
