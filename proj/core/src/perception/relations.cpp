#include "auav/perception/relations.hpp"

#include <algorithm>
#include <limits>

namespace auav::perception {

std::vector<Relation> derive_relations(std::span<const Track> tracks,
                                       std::span<const Landmark> landmarks, double near_threshold,
                                       double isolation_radius) {
  std::vector<Relation> out;
  for (const auto& t : tracks) {
    const Vec3 p = t.position();
    for (const auto& lm : landmarks) {
      if (distance(p, lm.position) < near_threshold) out.push_back({t.id, "near", lm.id});
    }
    if (t.category != Category::person) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& other : tracks) {
      if (&other == &t || other.category != Category::person) continue;
      nearest = std::min(nearest, distance(p, other.position()));
    }
    if (nearest >= isolation_radius) out.push_back({t.id, "isolated", kCrowd});
  }
  std::sort(out.begin(), out.end());
  return out;
}

void to_json(nlohmann::json& j, const Relation& r) {
  j = nlohmann::json{{"subj", r.subj}, {"pred", r.pred}, {"obj", r.obj}};
}

void from_json(const nlohmann::json& j, Relation& r) {
  r.subj = j.at("subj").get<std::string>();
  r.pred = j.at("pred").get<std::string>();
  r.obj = j.at("obj").get<std::string>();
}

}  // namespace auav::perception
