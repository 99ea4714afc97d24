#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/common/vec.hpp"

namespace auav::sim {

enum class Category { person, vehicle, landmark };

std::string_view to_string(Category c);
Category category_from_string(std::string_view s);

struct Behavior {
  enum class Kind { stationary, waypoint_walk, collapse_at_tick };

  Kind kind = Kind::stationary;
  std::vector<Vec3> waypoints;  // waypoint_walk
  double speed = 1.0;           // waypoint_walk, m/s
  bool loop = false;            // waypoint_walk
  std::uint64_t collapse_tick = 0;

  static Behavior stationary() { return {}; }
  static Behavior walk(std::vector<Vec3> waypoints, double speed, bool loop = false);
  static Behavior collapse_at(std::uint64_t tick);

  friend bool operator==(const Behavior&, const Behavior&) = default;
};

struct EntitySpec {
  std::string id;
  Category category = Category::person;
  Pose3 pose;
  Vec3 velocity;
  Behavior behavior;

  friend bool operator==(const EntitySpec&, const EntitySpec&) = default;
};

struct GeoOrigin {
  double lat = 21.4225;  // degrees
  double lon = 39.8262;
  double alt = 277.0;    // meters above sea level

  friend bool operator==(const GeoOrigin&, const GeoOrigin&) = default;
};

struct EgoParams {
  double battery = 1.0;
  double battery_drain_per_s = 0.0005;
  double max_speed = 15.0;  // airframe limit; the safety envelope is usually tighter
  double descent_speed = 2.0;

  friend bool operator==(const EgoParams&, const EgoParams&) = default;
};

// Inputs for the mock weather service. Values cycle per call.
struct WeatherSpec {
  std::vector<double> wind_speeds{10.0};
  int fail_first_calls = 0;

  friend bool operator==(const WeatherSpec&, const WeatherSpec&) = default;
};

struct ScenarioSpec {
  std::string name;
  std::uint64_t duration_ticks = 0;
  double tick_dt = 0.1;
  std::vector<EntitySpec> entities;
  Pose3 ego_start;
  Box geofence;
  std::uint64_t rng_seed = 0;

  EgoParams ego;
  GeoOrigin origin;
  std::vector<std::string> degraded_sensors;
  WeatherSpec weather;
  std::string goal = "Monitor the area and assist anyone in distress.";

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

// Parses and validates. Errors carry the offending field path
// (e.g. "entities[1].behavior.tick") or the JSON line/column.
ScenarioSpec load_scenario(std::string_view document);
ScenarioSpec load_scenario_file(const std::filesystem::path& path);

// Throws Error(validation_error) naming the first violated field.
void validate(const ScenarioSpec& spec);

nlohmann::json to_json(const ScenarioSpec& spec);

}  // namespace auav::sim
