#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/perception/kalman.hpp"

namespace auav::perception {

struct Relation {
  std::string subj;
  std::string pred;
  std::string obj;

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation&, const Relation&) = default;
};

struct Landmark {
  std::string id;
  Vec3 position;
};

inline constexpr const char* kCrowd = "crowd";

// (track, "near", landmark) for distance < near_threshold.
// (person, "isolated", "crowd") when the nearest other person track is at least
// isolation_radius away (or there is none). Output is sorted.
std::vector<Relation> derive_relations(std::span<const Track> tracks,
                                       std::span<const Landmark> landmarks, double near_threshold,
                                       double isolation_radius = 8.0);

void to_json(nlohmann::json& j, const Relation& r);
void from_json(const nlohmann::json& j, Relation& r);

}  // namespace auav::perception
