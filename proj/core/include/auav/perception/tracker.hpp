#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "auav/perception/kalman.hpp"

namespace auav::perception {

struct Association {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (track index, detection index)
  std::vector<std::size_t> unassigned;                      // detections flagged for birth
};

// Greedy nearest neighbour inside the gate. Candidate pairs (same category,
// distance < gate_radius) are taken in (distance, track id, detection index)
// order; each track and each detection is used at most once.
Association associate(std::span<const Track> tracks, std::span<const Detection> detections,
                      double gate_radius);

struct TrackerParams {
  double gate_radius = 0.75;  // m; below typical crowd spacing, above per-tick walking motion
  double accel_noise = 0.001;  // white-acceleration spectral density, m^2/s^3
  double measurement_sd = 0.01;
  double initial_velocity_sd = 2.0;
  double ema_alpha = 0.3;
  double motion_eps = 0.05;
  std::uint32_t confirm_hits = 2;   // consecutive detections before a track is reported
  std::uint64_t stale_ticks = 30;   // confirmed tracks unseen for longer are dropped
};

// M-of-N tracker: tentative tracks need confirm_hits consecutive detections,
// confirmed tracks die after stale_ticks without an update.
class Tracker {
 public:
  explicit Tracker(TrackerParams params = {});

  void update(std::span<const Detection> detections, std::uint64_t tick, double dt);

  std::vector<Track> confirmed() const;
  std::size_t tentative_count() const;
  const TrackerParams& params() const { return params_; }
  const std::vector<std::string>& health_notes() const { return health_notes_; }

 private:
  struct Slot {
    Track track;
    bool confirmed = false;
    std::uint32_t hits = 0;
  };

  std::string next_id(Category c);

  TrackerParams params_;
  std::vector<Slot> slots_;
  std::uint32_t person_counter_ = 0;
  std::uint32_t vehicle_counter_ = 0;
  std::uint64_t tentative_counter_ = 0;
  std::vector<std::string> health_notes_;
};

}  // namespace auav::perception
