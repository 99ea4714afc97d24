#include "auav/perception/detector.hpp"

#include <algorithm>

#include "auav/common/error.hpp"

namespace auav::perception {

void DetectorParams::validate() const {
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(miss_rate)) throw Error(ErrorCode::invalid_argument, "miss_rate must be in [0,1]");
  if (!unit(false_positive_rate)) {
    throw Error(ErrorCode::invalid_argument, "false_positive_rate must be in [0,1]");
  }
  if (position_noise_sd < 0.0) throw Error(ErrorCode::invalid_argument, "noise sd must be >= 0");
  if (confidence_sd < 0.0) throw Error(ErrorCode::invalid_argument, "confidence sd must be >= 0");
}

std::vector<Detection> simulate_detector(std::span<const sim::VisibleEntity> visible,
                                         const DetectorParams& params, Rng& rng) {
  params.validate();
  std::vector<Detection> out;
  const auto draw_conf = [&] {
    return std::clamp(rng.normal(params.confidence_mean, params.confidence_sd), 0.0, 1.0);
  };
  for (const auto& v : visible) {
    if (v.entity.category == Category::landmark) continue;
    // Draw order is fixed per entity so a miss does not shift later draws.
    const bool missed = rng.uniform() < params.miss_rate;
    Vec3 noise{rng.normal(0.0, 1.0), rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
    const double conf = draw_conf();
    if (missed) continue;
    out.push_back(Detection{v.entity.category,
                            v.entity.pose.position + noise * params.position_noise_sd, conf,
                            v.entity.id});
  }
  const bool false_positive = rng.uniform() < params.false_positive_rate;
  const double fx = rng.uniform();
  const double fy = rng.uniform();
  const double fconf = draw_conf();
  if (false_positive && params.false_positive_region) {
    const Box& r = *params.false_positive_region;
    out.push_back(Detection{Category::person,
                            {r.min.x + fx * (r.max.x - r.min.x), r.min.y + fy * (r.max.y - r.min.y),
                             r.min.z},
                            fconf, std::nullopt});
  }
  return out;
}

Box ground_footprint(const sim::SensorFrustum& fov, double ground_z) {
  const double depth = std::clamp(fov.apex.z - ground_z, 0.0, fov.far);
  const double hx = fov.slope_x * depth;
  const double hy = fov.slope_y * depth;
  return Box{{fov.apex.x - hx, fov.apex.y - hy, ground_z}, {fov.apex.x + hx, fov.apex.y + hy, ground_z}};
}

}  // namespace auav::perception
