#include "auav/perception/pipeline.hpp"

namespace auav::perception {

PerceptionPipeline::PerceptionPipeline(PerceptionConfig config, Rng detector_rng)
    : config_(std::move(config)), rng_(detector_rng), tracker_(config_.tracker) {}

std::vector<Landmark> landmarks_of(const sim::SimState& world) {
  std::vector<Landmark> out;
  for (const auto& e : world.entities) {
    if (e.category == Category::landmark) out.push_back({e.id, e.pose.position});
  }
  return out;
}

Frame PerceptionPipeline::process(const sim::SimState& world, std::size_t agent) {
  const auto& ego = world.ego(agent);
  const auto fov =
      sim::SensorFrustum::downward(ego.pose.position, config_.camera_half_fov, config_.camera_range);
  const auto visible = sim::visible_entities(world, fov);

  DetectorParams params = config_.detector;
  params.false_positive_region = ground_footprint(fov, world.spec->geofence.min.z);

  Frame frame;
  for (const auto& v : visible) {
    if (v.entity.category == Category::person) ++frame.persons_visible;
  }
  frame.detections = simulate_detector(visible, params, rng_);

  const double dt = started_ ? static_cast<double>(world.tick - last_tick_) * world.spec->tick_dt : 0.0;
  started_ = true;
  last_tick_ = world.tick;
  tracker_.update(frame.detections, world.tick, dt);

  const auto tracks = tracker_.confirmed();
  const auto landmarks = landmarks_of(world);
  const auto relations =
      derive_relations(tracks, landmarks, config_.near_threshold, config_.isolation_radius);
  EgoEstimate ego_est;
  ego_est.pose = ego.pose;
  frame.world = emit_world_model(tracks, relations, ego_est, Health{world.spec->degraded_sensors},
                                 world.time, world.tick, config_.tracker.stale_ticks);
  return frame;
}

}  // namespace auav::perception
