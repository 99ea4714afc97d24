#pragma once

#include <cstdint>
#include <vector>

#include "auav/sim/scenario.hpp"

namespace auav::mission {

struct ScenePoolParams {
  std::size_t scenes = 44;
  double emergency_rate = 0.25;  // rounded to a whole number of scenes
  std::size_t min_crowd = 4;
  std::size_t max_crowd = 9;
  std::uint64_t duration_ticks = 30;
  double altitude = 30.0;
};

// Seeded variations of one patrol: a walking crowd under the camera, plus in emergency
// scenes one person lying well away from it. Exactly round(scenes * emergency_rate)
// scenes are emergencies, at seeded positions in the pool.
std::vector<sim::ScenarioSpec> generate_scene_pool(std::uint64_t seed, const ScenePoolParams& params = {});

bool is_emergency_scene(const sim::ScenarioSpec& spec);

}  // namespace auav::mission
