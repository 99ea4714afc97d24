#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/perception/relations.hpp"

namespace auav::perception {

struct EgoEstimate {
  Pose3 pose;
  Matrix3 cov = Matrix3::Identity() * 0.25;

  bool operator==(const EgoEstimate& o) const { return pose == o.pose && cov == o.cov; }
};

struct WorldObject {
  std::string id;
  Category category = Category::person;
  Vec3 pose;
  Vec3 vel;
  double conf = 0.0;
  Matrix6 cov = Matrix6::Identity();
  std::uint32_t frames_stationary = 0;

  bool operator==(const WorldObject& o) const {
    return id == o.id && category == o.category && pose == o.pose && vel == o.vel &&
           conf == o.conf && cov == o.cov && frames_stationary == o.frames_stationary;
  }
};

struct Health {
  std::vector<std::string> degraded_sensors;

  friend bool operator==(const Health&, const Health&) = default;
};

// The perception layer's published snapshot. Every element carries uncertainty.
struct WorldModel {
  double timestamp = 0.0;
  EgoEstimate ego_pose;
  std::vector<WorldObject> objects;
  std::vector<Relation> relations;
  Health health;

  const WorldObject* find(std::string_view id) const;
  bool has_relation(std::string_view subj, std::string_view pred) const;

  bool operator==(const WorldModel& o) const {
    return timestamp == o.timestamp && ego_pose == o.ego_pose && objects == o.objects &&
           relations == o.relations && health == o.health;
  }
};

// Confirmed tracks updated within stale_ticks of current_tick become objects
// (sorted by id); relations are copied as given.
WorldModel emit_world_model(std::span<const Track> tracks, std::span<const Relation> relations,
                            const EgoEstimate& ego, const Health& health, double timestamp,
                            std::uint64_t current_tick, std::uint64_t stale_ticks = 30);

// Wire format. Object entries use the key "class" for the category.
nlohmann::json to_wire(const WorldModel& world);
WorldModel world_model_from_wire(const nlohmann::json& j);

}  // namespace auav::perception
