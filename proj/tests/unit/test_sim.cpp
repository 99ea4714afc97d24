#include <gtest/gtest.h>

#include <cmath>

#include "auav/common/error.hpp"
#include "auav/common/rng.hpp"
#include "auav/sim/scenario.hpp"
#include "auav/sim/world.hpp"

using namespace auav;
using namespace auav::sim;

namespace {

const char* kMinimal = R"({
  "name": "empty",
  "duration_ticks": 10,
  "geofence": {"min": [-50, -50, 0], "max": [50, 50, 100]},
  "ego_start": {"position": [0, 0, 20]}
})";

ScenarioSpec base_spec() {
  ScenarioSpec s;
  s.name = "t";
  s.duration_ticks = 100;
  s.geofence = Box{{-50, -50, 0}, {50, 50, 100}};
  s.ego_start.position = {0, 0, 20};
  return s;
}

EntitySpec person(std::string id, Vec3 p, Behavior b = Behavior::stationary()) {
  EntitySpec e;
  e.id = std::move(id);
  e.category = Category::person;
  e.pose.position = p;
  e.behavior = std::move(b);
  return e;
}

}  // namespace

TEST(Scenario, MinimalDocumentHasNoEntitiesAndDefaultTick) {
  const auto s = load_scenario(kMinimal);
  EXPECT_TRUE(s.entities.empty());
  EXPECT_DOUBLE_EQ(s.tick_dt, 0.1);
}

TEST(Scenario, CollapseBehaviorIsCarried) {
  const auto s = load_scenario(R"({
    "name": "c", "duration_ticks": 200,
    "geofence": {"min": [-50, -50, 0], "max": [50, 50, 100]},
    "ego_start": {"position": [0, 0, 20]},
    "entities": [{"id": "p1", "category": "person", "pose": [1, 2, 0],
                  "behavior": {"type": "collapse_at_tick", "tick": 120}}]
  })");
  ASSERT_EQ(s.entities.size(), 1u);
  EXPECT_EQ(s.entities[0].behavior.kind, Behavior::Kind::collapse_at_tick);
  EXPECT_EQ(s.entities[0].behavior.collapse_tick, 120u);
}

TEST(Scenario, ZeroDurationNamesTheField) {
  try {
    load_scenario(R"({"name": "z", "duration_ticks": 0,
      "geofence": {"min": [-1, -1, 0], "max": [1, 1, 1]}, "ego_start": [0, 0, 0.5]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("duration_ticks"), std::string::npos);
  }
}

TEST(Scenario, MalformedJsonIsParseError) {
  try {
    load_scenario("{\"name\": ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
  }
}

TEST(Scenario, CollapseOnVehicleRejected) {
  auto s = base_spec();
  auto v = person("car", {0, 0, 0}, Behavior::collapse_at(3));
  v.category = Category::vehicle;
  s.entities.push_back(v);
  EXPECT_THROW(validate(s), Error);
}

TEST(Scenario, DuplicateIdsRejected) {
  auto s = base_spec();
  s.entities.push_back(person("a", {0, 0, 0}));
  s.entities.push_back(person("a", {1, 0, 0}));
  EXPECT_THROW(validate(s), Error);
}

TEST(Scenario, JsonRoundTrip) {
  auto s = base_spec();
  s.entities.push_back(person("w", {1, 1, 0}, Behavior::walk({{5, 1, 0}, {5, 5, 0}}, 1.3, true)));
  s.entities.push_back(person("c", {2, 2, 0}, Behavior::collapse_at(40)));
  s.weather.wind_speeds = {7.0, 16.0};
  s.degraded_sensors = {"thermal"};
  EXPECT_EQ(load_scenario(to_json(s).dump()), s);
}

TEST(Step, ZeroDtIsIdentity) {
  auto s = base_spec();
  s.entities.push_back(person("w", {0, 0, 0}, Behavior::walk({{10, 0, 0}}, 1.0)));
  const auto w0 = make_initial_state(s);
  const auto w1 = step(w0, 0.0);
  EXPECT_EQ(w1.tick, w0.tick);
  EXPECT_EQ(w1.entities[0].pose, w0.entities[0].pose);
}

TEST(Step, WaypointWalkDisplacement) {
  auto s = base_spec();
  s.entities.push_back(person("w", {0, 0, 0}, Behavior::walk({{10, 0, 0}}, 1.0)));
  auto w = make_initial_state(s);
  for (int i = 0; i < 10; ++i) w = step(std::move(w), 0.1);
  EXPECT_NEAR(w.entities[0].pose.position.x, 1.0, 1e-12);
  EXPECT_NEAR(w.entities[0].pose.position.y, 0.0, 1e-12);
}

TEST(Step, CollapseStopsEntityForGood) {
  auto s = base_spec();
  auto e = person("p", {0, 0, 0}, Behavior::collapse_at(5));
  e.velocity = {1, 0, 0};
  s.entities.push_back(e);
  auto w = make_initial_state(s);
  for (int i = 0; i < 6; ++i) w = step(std::move(w), 0.1);
  EXPECT_EQ(w.entities[0].velocity, (Vec3{}));
  const Vec3 rest = w.entities[0].pose.position;
  for (int i = 0; i < 50; ++i) {
    w = step(std::move(w), 0.1);
    ASSERT_EQ(w.entities[0].velocity.norm(), 0.0);
    ASSERT_EQ(w.entities[0].pose.position, rest);
  }
}

TEST(Step, ClockIsMonotone) {
  auto w = make_initial_state(base_spec());
  double last = w.time;
  for (int i = 0; i < 100; ++i) {
    w = step(std::move(w), 0.1);
    ASSERT_GT(w.time, last);
    ASSERT_NEAR(w.time - last, 0.1, 1e-12);
    last = w.time;
  }
}

TEST(Step, DeterministicEventLog) {
  auto s = base_spec();
  s.entities.push_back(person("c", {3, 3, 0}, Behavior::collapse_at(7)));
  auto run = [&] {
    auto w = make_initial_state(s);
    apply_command(w, 0, FlightCommand::fly_to({10, 10, 20}, 5.0));
    for (int i = 0; i < 60; ++i) w = step(std::move(w), 0.1);
    std::string out;
    for (const auto& e : w.events) out += to_json(e).dump() + "\n";
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(Visibility, EmptyWorld) {
  const auto w = make_initial_state(base_spec());
  EXPECT_TRUE(visible_entities(w, SensorFrustum::downward({0, 0, 20}, 0.5, 60)).empty());
}

TEST(Visibility, BoundaryPlaneIsInside) {
  auto s = base_spec();
  // slope 1 at depth 20 reaches x = 20 exactly.
  s.entities.push_back(person("edge", {20, 0, 0}));
  const auto w = make_initial_state(s);
  SensorFrustum f{{0, 0, 20}, 1.0, 1.0, 60.0};
  EXPECT_EQ(visible_entities(w, f).size(), 1u);
}

TEST(Visibility, MatchesBruteForceContainmentSortedByRange) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = base_spec();
    for (int i = 0; i < 8; ++i) {
      s.entities.push_back(person("e" + std::to_string(i), {rng.uniform(-45, 45), rng.uniform(-45, 45), 0}));
    }
    const auto w = make_initial_state(s);
    const auto f = SensorFrustum::downward({rng.uniform(-10, 10), rng.uniform(-10, 10), 20}, 0.7, 60);
    const auto vis = visible_entities(w, f);
    std::size_t expected = 0;
    for (const auto& e : w.entities) {
      const double depth = f.apex.z - e.pose.position.z;
      if (std::abs(e.pose.position.x - f.apex.x) <= f.slope_x * depth &&
          std::abs(e.pose.position.y - f.apex.y) <= f.slope_y * depth) {
        ++expected;
      }
    }
    ASSERT_EQ(vis.size(), expected);
    for (std::size_t i = 1; i < vis.size(); ++i) ASSERT_LE(vis[i - 1].range, vis[i].range);
  }
}

TEST(Command, LandAndDeployRecordsDeployEvent) {
  auto w = make_initial_state(base_spec());
  const auto ack = apply_command(w, 0, FlightCommand::land_and_deploy());
  ASSERT_TRUE(ack.accepted);
  for (int i = 0; i < 200 && trajectory_active(w, 0); ++i) w = step(std::move(w), 0.1);
  EXPECT_TRUE(w.ego().landed);
  const bool deployed = std::any_of(w.events.begin(), w.events.end(),
                                    [](const SimEvent& e) { return e.type == "rescue_kit_deployed"; });
  EXPECT_TRUE(deployed);
}

TEST(Command, FlyToCurrentPoseIsComplete) {
  auto w = make_initial_state(base_spec());
  const auto ack = apply_command(w, 0, FlightCommand::fly_to(w.ego().pose.position, 5.0));
  EXPECT_TRUE(ack.accepted);
  EXPECT_TRUE(ack.complete);
}

TEST(Command, OutsideGeofenceRejectedStateUnchanged) {
  auto w = make_initial_state(base_spec());
  const auto before = w.agents[0].ego.pose;
  const auto ack = apply_command(w, 0, FlightCommand::fly_to({500, 0, 20}, 5.0));
  EXPECT_FALSE(ack.accepted);
  EXPECT_EQ(ack.reason, "geofence");
  EXPECT_FALSE(trajectory_active(w, 0));
  EXPECT_EQ(w.agents[0].ego.pose, before);
}

TEST(Command, BatteryNeverIncreases) {
  auto w = make_initial_state(base_spec());
  apply_command(w, 0, FlightCommand::fly_to({30, 30, 40}, 10.0));
  double last = w.ego().battery_fraction;
  for (int i = 0; i < 300; ++i) {
    w = step(std::move(w), 0.1);
    ASSERT_LE(w.ego().battery_fraction, last);
    last = w.ego().battery_fraction;
  }
}
