#include "auav/perception/tracker.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

namespace auav::perception {

Association associate(std::span<const Track> tracks, std::span<const Detection> detections,
                      double gate_radius) {
  struct Candidate {
    double dist;
    std::size_t track;
    std::size_t det;
  };
  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    for (std::size_t d = 0; d < detections.size(); ++d) {
      if (tracks[t].category != detections[d].category) continue;
      const double dist = distance(tracks[t].position(), detections[d].position);
      if (dist < gate_radius) candidates.push_back({dist, t, d});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    return std::tie(a.dist, tracks[a.track].id, a.det) < std::tie(b.dist, tracks[b.track].id, b.det);
  });

  Association out;
  std::vector<bool> track_used(tracks.size(), false);
  std::vector<bool> det_used(detections.size(), false);
  for (const auto& c : candidates) {
    if (track_used[c.track] || det_used[c.det]) continue;
    track_used[c.track] = det_used[c.det] = true;
    out.pairs.emplace_back(c.track, c.det);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (!det_used[d]) out.unassigned.push_back(d);
  }
  return out;
}

Tracker::Tracker(TrackerParams params) : params_(params) {}

std::string Tracker::next_id(Category c) {
  char buf[32];
  if (c == Category::vehicle) {
    std::snprintf(buf, sizeof buf, "V-%02u", ++vehicle_counter_);
  } else {
    std::snprintf(buf, sizeof buf, "P-%02u", ++person_counter_);
  }
  return buf;
}

void Tracker::update(std::span<const Detection> detections, std::uint64_t tick, double dt) {
  const Matrix6 Q = white_acceleration_noise(params_.accel_noise, dt);
  const Matrix3 R = Matrix3::Identity() * (params_.measurement_sd * params_.measurement_sd);
  const UpdateParams up{params_.motion_eps, params_.ema_alpha};

  for (auto& s : slots_) s.track = kf_predict(s.track, dt, Q);

  std::vector<Track> predicted;
  predicted.reserve(slots_.size());
  for (const auto& s : slots_) predicted.push_back(s.track);
  const Association assoc = associate(predicted, detections, params_.gate_radius);

  std::vector<bool> updated(slots_.size(), false);
  for (const auto& [ti, di] : assoc.pairs) {
    auto result = kf_update(slots_[ti].track, detections[di], R, up);
    if (!result.applied) {
      health_notes_.push_back(std::move(result.health_note));
      continue;
    }
    slots_[ti].track = std::move(result.track);
    slots_[ti].track.last_update_tick = tick;
    ++slots_[ti].hits;
    updated[ti] = true;
  }

  std::vector<Slot> next;
  next.reserve(slots_.size() + assoc.unassigned.size());
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    Slot& s = slots_[i];
    if (!s.confirmed) {
      if (!updated[i]) continue;  // tentative tracks need consecutive hits
      if (s.hits >= params_.confirm_hits) {
        s.confirmed = true;
        s.track.id = next_id(s.track.category);
      }
    } else if (tick - s.track.last_update_tick > params_.stale_ticks) {
      continue;
    }
    next.push_back(std::move(s));
  }

  const double pos_var = params_.measurement_sd * params_.measurement_sd;
  const double vel_var = params_.initial_velocity_sd * params_.initial_velocity_sd;
  for (std::size_t di : assoc.unassigned) {
    const Detection& d = detections[di];
    Slot s;
    s.track.id = "~tentative-" + std::to_string(++tentative_counter_);
    s.track.category = d.category;
    s.track.state_mean << d.position.x, d.position.y, d.position.z, 0.0, 0.0, 0.0;
    s.track.covariance = Matrix6::Zero();
    s.track.covariance.diagonal() << pos_var, pos_var, pos_var, vel_var, vel_var, vel_var;
    s.track.confidence = d.confidence;
    s.track.frames_seen = 1;
    s.track.last_update_tick = tick;
    s.hits = 1;
    if (s.hits >= params_.confirm_hits) {
      s.confirmed = true;
      s.track.id = next_id(s.track.category);
    }
    next.push_back(std::move(s));
  }
  slots_ = std::move(next);
}

std::vector<Track> Tracker::confirmed() const {
  std::vector<Track> out;
  for (const auto& s : slots_) {
    if (s.confirmed) out.push_back(s.track);
  }
  std::sort(out.begin(), out.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
  return out;
}

std::size_t Tracker::tentative_count() const {
  return static_cast<std::size_t>(
      std::count_if(slots_.begin(), slots_.end(), [](const Slot& s) { return !s.confirmed; }));
}

}  // namespace auav::perception
