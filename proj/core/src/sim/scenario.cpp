#include "auav/sim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"

namespace auav::sim {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::validation_error, field + ": " + why);
}

Vec3 vec_at(const json& j, std::string_view key, std::string_view path) {
  const json& v = field::require(j, key, path);
  try {
    return v.get<Vec3>();
  } catch (const std::exception& e) {
    field::throw_type_error(field::join(path, key), e.what());
  }
}

Behavior parse_behavior(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "stationary") return Behavior::stationary();
    invalid(path, "behavior '" + s + "' needs parameters or is unknown");
  }
  const auto type = field::get<std::string>(j, "type", path);
  if (type == "stationary") return Behavior::stationary();
  if (type == "waypoint_walk") {
    const json& wps = field::require(j, "waypoints", path);
    if (!wps.is_array()) field::throw_type_error(field::join(path, "waypoints"), "expected array");
    std::vector<Vec3> points;
    for (std::size_t i = 0; i < wps.size(); ++i) {
      try {
        points.push_back(wps[i].get<Vec3>());
      } catch (const std::exception& e) {
        field::throw_type_error(field::index(field::join(path, "waypoints"), i), e.what());
      }
    }
    return Behavior::walk(std::move(points), field::get_or<double>(j, "speed", path, 1.0),
                          field::get_or<bool>(j, "loop", path, false));
  }
  if (type == "collapse_at_tick") {
    const auto tick = field::get<std::int64_t>(j, "tick", path);
    if (tick < 0) invalid(field::join(path, "tick"), "must be >= 0");
    return Behavior::collapse_at(static_cast<std::uint64_t>(tick));
  }
  invalid(field::join(path, "type"), "unknown behavior '" + type + "'");
}

json behavior_json(const Behavior& b) {
  switch (b.kind) {
    case Behavior::Kind::stationary: return json{{"type", "stationary"}};
    case Behavior::Kind::waypoint_walk:
      return json{{"type", "waypoint_walk"}, {"waypoints", b.waypoints}, {"speed", b.speed},
                  {"loop", b.loop}};
    case Behavior::Kind::collapse_at_tick:
      return json{{"type", "collapse_at_tick"}, {"tick", b.collapse_tick}};
  }
  return {};
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::person: return "person";
    case Category::vehicle: return "vehicle";
    case Category::landmark: return "landmark";
  }
  return "person";
}

Category category_from_string(std::string_view s) {
  if (s == "person") return Category::person;
  if (s == "vehicle") return Category::vehicle;
  if (s == "landmark") return Category::landmark;
  throw Error(ErrorCode::parse_error, "unknown category '" + std::string(s) + "'");
}

Behavior Behavior::walk(std::vector<Vec3> waypoints, double speed, bool loop) {
  Behavior b;
  b.kind = Kind::waypoint_walk;
  b.waypoints = std::move(waypoints);
  b.speed = speed;
  b.loop = loop;
  return b;
}

Behavior Behavior::collapse_at(std::uint64_t tick) {
  Behavior b;
  b.kind = Kind::collapse_at_tick;
  b.collapse_tick = tick;
  return b;
}

void validate(const ScenarioSpec& spec) {
  if (spec.duration_ticks == 0) invalid("duration_ticks", "must be > 0");
  if (!(spec.tick_dt > 0.0)) invalid("tick_dt", "must be > 0");
  if (!spec.geofence.well_formed()) invalid("geofence", "min must be below max on every axis");
  if (!spec.geofence.contains(spec.ego_start.position)) invalid("ego_start", "outside geofence");
  if (spec.ego.battery < 0.0 || spec.ego.battery > 1.0) invalid("ego.battery", "must be in [0,1]");
  if (spec.ego.battery_drain_per_s < 0.0) invalid("ego.battery_drain_per_s", "must be >= 0");
  if (!(spec.ego.max_speed > 0.0)) invalid("ego.max_speed", "must be > 0");
  if (!(spec.ego.descent_speed > 0.0)) invalid("ego.descent_speed", "must be > 0");
  if (spec.weather.wind_speeds.empty()) invalid("weather.wind_speeds", "must not be empty");

  std::set<std::string> ids;
  for (std::size_t i = 0; i < spec.entities.size(); ++i) {
    const auto& e = spec.entities[i];
    const auto path = field::index("entities", i);
    if (e.id.empty()) invalid(path + ".id", "must not be empty");
    if (!ids.insert(e.id).second) invalid(path + ".id", "duplicate id '" + e.id + "'");
    if (e.behavior.kind == Behavior::Kind::collapse_at_tick && e.category != Category::person) {
      invalid(path + ".behavior", "collapse_at_tick is only valid for persons");
    }
    if (e.behavior.kind == Behavior::Kind::waypoint_walk) {
      if (e.behavior.waypoints.empty()) invalid(path + ".behavior.waypoints", "must not be empty");
      if (!(e.behavior.speed > 0.0)) invalid(path + ".behavior.speed", "must be > 0");
    }
  }
}

ScenarioSpec load_scenario(std::string_view document) {
  const json doc = parse_json_text(document, "scenario");
  if (!doc.is_object()) throw Error(ErrorCode::parse_error, "scenario: expected a JSON object");

  ScenarioSpec spec;
  spec.name = field::get<std::string>(doc, "name", "");
  const auto duration = field::get<std::int64_t>(doc, "duration_ticks", "");
  if (duration <= 0) invalid("duration_ticks", "must be > 0");
  spec.duration_ticks = static_cast<std::uint64_t>(duration);
  spec.tick_dt = field::get_or<double>(doc, "tick_dt", "", 0.1);
  spec.rng_seed = field::get_or<std::uint64_t>(doc, "rng_seed", "", 0);

  const json& fence = field::require(doc, "geofence", "");
  spec.geofence = Box{vec_at(fence, "min", "geofence"), vec_at(fence, "max", "geofence")};

  const json& start = field::require(doc, "ego_start", "");
  if (start.is_array()) {
    spec.ego_start.position = vec_at(doc, "ego_start", "");
  } else {
    spec.ego_start.position = vec_at(start, "position", "ego_start");
    spec.ego_start.yaw = field::get_or<double>(start, "yaw", "ego_start", 0.0);
  }

  if (doc.contains("entities")) {
    const json& arr = doc["entities"];
    if (!arr.is_array()) field::throw_type_error("entities", "expected array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto path = field::index("entities", i);
      const json& e = arr[i];
      EntitySpec es;
      es.id = field::get<std::string>(e, "id", path);
      try {
        es.category = category_from_string(field::get<std::string>(e, "category", path));
      } catch (const Error& err) {
        throw Error(ErrorCode::parse_error, path + ".category: " + err.what());
      }
      es.pose.position = vec_at(e, "pose", path);
      es.pose.yaw = field::get_or<double>(e, "yaw", path, 0.0);
      if (e.contains("velocity")) es.velocity = vec_at(e, "velocity", path);
      if (e.contains("behavior")) es.behavior = parse_behavior(e["behavior"], path + ".behavior");
      spec.entities.push_back(std::move(es));
    }
  }

  if (doc.contains("ego")) {
    const json& ego = doc["ego"];
    spec.ego.battery = field::get_or<double>(ego, "battery", "ego", spec.ego.battery);
    spec.ego.battery_drain_per_s =
        field::get_or<double>(ego, "battery_drain_per_s", "ego", spec.ego.battery_drain_per_s);
    spec.ego.max_speed = field::get_or<double>(ego, "max_speed", "ego", spec.ego.max_speed);
    spec.ego.descent_speed =
        field::get_or<double>(ego, "descent_speed", "ego", spec.ego.descent_speed);
  }
  if (doc.contains("origin")) {
    const json& o = doc["origin"];
    spec.origin.lat = field::get<double>(o, "lat", "origin");
    spec.origin.lon = field::get<double>(o, "lon", "origin");
    spec.origin.alt = field::get_or<double>(o, "alt", "origin", spec.origin.alt);
  }
  spec.degraded_sensors =
      field::get_or<std::vector<std::string>>(doc, "degraded_sensors", "", {});
  if (doc.contains("weather")) {
    const json& w = doc["weather"];
    spec.weather.wind_speeds =
        field::get_or<std::vector<double>>(w, "wind_speeds", "weather", spec.weather.wind_speeds);
    spec.weather.fail_first_calls = field::get_or<int>(w, "fail_first_calls", "weather", 0);
  }
  spec.goal = field::get_or<std::string>(doc, "goal", "", spec.goal);

  validate(spec);
  return spec;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

nlohmann::json to_json(const ScenarioSpec& spec) {
  json entities = json::array();
  for (const auto& e : spec.entities) {
    entities.push_back({{"id", e.id},
                        {"category", to_string(e.category)},
                        {"pose", e.pose.position},
                        {"yaw", e.pose.yaw},
                        {"velocity", e.velocity},
                        {"behavior", behavior_json(e.behavior)}});
  }
  return json{
      {"name", spec.name},
      {"duration_ticks", spec.duration_ticks},
      {"tick_dt", spec.tick_dt},
      {"rng_seed", spec.rng_seed},
      {"geofence", spec.geofence},
      {"ego_start", spec.ego_start},
      {"entities", entities},
      {"ego",
       {{"battery", spec.ego.battery},
        {"battery_drain_per_s", spec.ego.battery_drain_per_s},
        {"max_speed", spec.ego.max_speed},
        {"descent_speed", spec.ego.descent_speed}}},
      {"origin", {{"lat", spec.origin.lat}, {"lon", spec.origin.lon}, {"alt", spec.origin.alt}}},
      {"degraded_sensors", spec.degraded_sensors},
      {"weather",
       {{"wind_speeds", spec.weather.wind_speeds},
        {"fail_first_calls", spec.weather.fail_first_calls}}},
      {"goal", spec.goal},
  };
}

}  // namespace auav::sim
