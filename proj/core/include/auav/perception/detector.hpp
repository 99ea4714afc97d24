#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "auav/common/rng.hpp"
#include "auav/common/vec.hpp"
#include "auav/sim/world.hpp"

namespace auav::perception {

using sim::Category;

struct Detection {
  Category category = Category::person;
  Vec3 position;
  double confidence = 0.0;
  // Ground-truth link, kept for evaluation only. Never used by tracking.
  std::optional<std::string> source_entity;
};

// Stand-in for an image detector. Confidence defaults are centred on the
// per-frame mean reported for the rule-based baseline.
struct DetectorParams {
  double miss_rate = 0.25;
  double false_positive_rate = 0.02;  // expected false detections per frame (Bernoulli)
  double position_noise_sd = 0.01;    // meters, per axis
  double confidence_mean = 0.716;
  double confidence_sd = 0.08;
  // Where false positives may appear; usually the camera footprint on the ground.
  std::optional<Box> false_positive_region;

  void validate() const;
};

// Each person/vehicle is missed independently with miss_rate; survivors get
// Gaussian position noise and a clipped-Gaussian confidence. Landmarks are map
// features and never produce detections.
std::vector<Detection> simulate_detector(std::span<const sim::VisibleEntity> visible,
                                         const DetectorParams& params, Rng& rng);

// Ground-plane rectangle seen by a downward frustum, as a thin box at ground_z.
Box ground_footprint(const sim::SensorFrustum& fov, double ground_z);

}  // namespace auav::perception
