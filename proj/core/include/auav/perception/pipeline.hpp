#pragma once

#include <cstddef>
#include <vector>

#include "auav/perception/detector.hpp"
#include "auav/perception/tracker.hpp"
#include "auav/perception/world_model.hpp"

namespace auav::perception {

struct PerceptionConfig {
  DetectorParams detector;
  TrackerParams tracker;
  double near_threshold = 5.0;
  double isolation_radius = 8.0;
  double camera_half_fov = 0.7853981633974483;  // 45 degrees
  double camera_range = 60.0;
};

struct Frame {
  std::vector<Detection> detections;
  std::size_t persons_visible = 0;  // ground truth, for evaluation records
  WorldModel world;
};

// Detector + tracker + relation derivation for one camera-carrying agent.
class PerceptionPipeline {
 public:
  PerceptionPipeline(PerceptionConfig config, Rng detector_rng);

  Frame process(const sim::SimState& world, std::size_t agent = 0);

  const Tracker& tracker() const { return tracker_; }
  const PerceptionConfig& config() const { return config_; }

 private:
  PerceptionConfig config_;
  Rng rng_;
  Tracker tracker_;
  std::uint64_t last_tick_ = 0;
  bool started_ = false;
};

std::vector<Landmark> landmarks_of(const sim::SimState& world);

}  // namespace auav::perception
