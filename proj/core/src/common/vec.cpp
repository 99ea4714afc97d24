#include "auav/common/vec.hpp"

#include <algorithm>

#include "auav/common/error.hpp"

namespace auav {

Vec3 Box::clamp(const Vec3& p, double margin) const {
  auto c = [margin](double v, double lo, double hi) {
    lo += margin;
    hi -= margin;
    if (lo > hi) return 0.5 * (lo + hi);
    return std::clamp(v, lo, hi);
  };
  return {c(p.x, min.x, max.x), c(p.y, min.y, max.y), c(p.z, min.z, max.z)};
}

void to_json(nlohmann::json& j, const Vec3& v) { j = nlohmann::json::array({v.x, v.y, v.z}); }

void from_json(const nlohmann::json& j, Vec3& v) {
  if (j.is_array()) {
    if (j.size() != 3) throw Error(ErrorCode::parse_error, "vector must have 3 components");
    v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    return;
  }
  if (j.is_object()) {
    v = {j.at("x").get<double>(), j.at("y").get<double>(), j.value("z", 0.0)};
    return;
  }
  throw Error(ErrorCode::parse_error, "vector must be [x,y,z] or {x,y,z}");
}

void to_json(nlohmann::json& j, const Pose3& p) {
  j = nlohmann::json{{"position", p.position}, {"yaw", p.yaw}};
}

void from_json(const nlohmann::json& j, Pose3& p) {
  if (j.is_array()) {
    p.position = j.get<Vec3>();
    p.yaw = 0.0;
    return;
  }
  p.position = j.at("position").get<Vec3>();
  p.yaw = j.value("yaw", 0.0);
}

void to_json(nlohmann::json& j, const Box& b) { j = nlohmann::json{{"min", b.min}, {"max", b.max}}; }

void from_json(const nlohmann::json& j, Box& b) {
  b.min = j.at("min").get<Vec3>();
  b.max = j.at("max").get<Vec3>();
}

}  // namespace auav
