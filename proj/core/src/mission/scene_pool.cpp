#include "auav/mission/scene_pool.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "auav/common/error.hpp"
#include "auav/common/rng.hpp"

namespace auav::mission {

namespace {

constexpr double kCrowdHalfWidth = 2.5;  // crowd fits in a 5 m square: nobody is isolated
constexpr const char* kVictimId = "victim";

}  // namespace

bool is_emergency_scene(const sim::ScenarioSpec& spec) {
  return std::any_of(spec.entities.begin(), spec.entities.end(),
                     [](const sim::EntitySpec& e) { return e.id == kVictimId; });
}

std::vector<sim::ScenarioSpec> generate_scene_pool(std::uint64_t seed, const ScenePoolParams& params) {
  if (params.scenes == 0) throw Error(ErrorCode::invalid_argument, "scene pool must not be empty");
  if (!(params.emergency_rate >= 0.0 && params.emergency_rate <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "emergency_rate must be in [0, 1]");
  }
  if (params.min_crowd < 3 || params.max_crowd < params.min_crowd) {
    throw Error(ErrorCode::invalid_argument, "crowd size range must start at 3 or more");
  }
  const RngStreams streams(seed);
  Rng layout = streams.stream("pool.layout");
  Rng pick = streams.stream("pool.emergencies");

  const auto emergencies =
      static_cast<std::size_t>(std::lround(static_cast<double>(params.scenes) * params.emergency_rate));
  std::vector<std::size_t> order(params.scenes);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates on our own stream, so the pool does not depend on the standard library.
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[pick.below(i)]);
  std::vector<bool> is_emergency(params.scenes, false);
  for (std::size_t i = 0; i < emergencies; ++i) is_emergency[order[i]] = true;

  std::vector<sim::ScenarioSpec> pool;
  pool.reserve(params.scenes);
  for (std::size_t s = 0; s < params.scenes; ++s) {
    sim::ScenarioSpec spec;
    char name[48];
    std::snprintf(name, sizeof name, "pool-%03zu", s + 1);
    spec.name = name;
    spec.duration_ticks = params.duration_ticks;
    spec.tick_dt = 0.1;
    spec.rng_seed = seed;
    spec.geofence = Box{{-100, -100, 0}, {100, 100, 120}};
    spec.ego_start.position = {0, 0, params.altitude};

    const Vec3 centre{layout.uniform(-8, 8), layout.uniform(-8, 8), 0};
    const double heading = layout.uniform(0, 2 * std::numbers::pi);
    const Vec3 dir{std::cos(heading), std::sin(heading), 0};
    const double speed = layout.uniform(1.0, 1.5);
    const auto crowd = params.min_crowd + layout.below(params.max_crowd - params.min_crowd + 1);
    for (std::size_t p = 0; p < crowd; ++p) {
      sim::EntitySpec e;
      e.id = "walker-" + std::to_string(p + 1);
      e.pose.position = centre + Vec3{layout.uniform(-kCrowdHalfWidth, kCrowdHalfWidth),
                                      layout.uniform(-kCrowdHalfWidth, kCrowdHalfWidth), 0};
      // The whole crowd walks in one direction, so its spread never grows.
      e.behavior = sim::Behavior::walk({e.pose.position + dir * 60.0}, speed);
      spec.entities.push_back(e);
    }
    if (is_emergency[s]) {
      // Behind the crowd's direction of travel, so the gap only widens.
      const double offset = layout.uniform(-0.6, 0.6);
      const double range = layout.uniform(16, 20);
      const Vec3 back{-std::cos(heading + offset), -std::sin(heading + offset), 0};
      sim::EntitySpec v;
      v.id = kVictimId;
      v.pose.position = centre + back * range;
      v.behavior = sim::Behavior::collapse_at(0);
      spec.entities.push_back(v);
    }
    sim::validate(spec);
    pool.push_back(std::move(spec));
  }
  return pool;
}

}  // namespace auav::mission
