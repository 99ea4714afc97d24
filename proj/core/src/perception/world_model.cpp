#include "auav/perception/world_model.hpp"

#include <algorithm>
#include <set>

#include "auav/common/error.hpp"

namespace auav::perception {

using nlohmann::json;

namespace {

template <typename Derived>
json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <int N>
Eigen::Matrix<double, N, N> matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N) {
    throw Error(ErrorCode::parse_error, std::string(what) + ": expected " + std::to_string(N) + " rows");
  }
  Eigen::Matrix<double, N, N> m;
  for (int r = 0; r < N; ++r) {
    if (!j[r].is_array() || j[r].size() != N) {
      throw Error(ErrorCode::parse_error, std::string(what) + ": bad row " + std::to_string(r));
    }
    for (int c = 0; c < N; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::parse_error, std::string(what) + ": expected object");
  for (const auto& [k, v] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) ==
        allowed.end()) {
      throw Error(ErrorCode::parse_error, std::string(what) + ": unexpected key '" + k + "'");
    }
  }
}

}  // namespace

const WorldObject* WorldModel::find(std::string_view id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

bool WorldModel::has_relation(std::string_view subj, std::string_view pred) const {
  return std::any_of(relations.begin(), relations.end(),
                     [&](const Relation& r) { return r.subj == subj && r.pred == pred; });
}

WorldModel emit_world_model(std::span<const Track> tracks, std::span<const Relation> relations,
                            const EgoEstimate& ego, const Health& health, double timestamp,
                            std::uint64_t current_tick, std::uint64_t stale_ticks) {
  WorldModel wm;
  wm.timestamp = timestamp;
  wm.ego_pose = ego;
  wm.health = health;
  std::set<std::string> kept;
  for (const auto& t : tracks) {
    if (current_tick > t.last_update_tick && current_tick - t.last_update_tick > stale_ticks) continue;
    WorldObject o;
    o.id = t.id;
    o.category = t.category;
    o.pose = t.position();
    o.vel = t.velocity();
    o.conf = std::clamp(t.confidence, 0.0, 1.0);
    o.cov = t.covariance;
    o.frames_stationary = t.frames_stationary;
    kept.insert(o.id);
    wm.objects.push_back(std::move(o));
  }
  std::sort(wm.objects.begin(), wm.objects.end(),
            [](const WorldObject& a, const WorldObject& b) { return a.id < b.id; });
  for (const auto& r : relations) {
    if (kept.contains(r.subj)) wm.relations.push_back(r);
  }
  return wm;
}

json to_wire(const WorldModel& world) {
  json objects = json::array();
  for (const auto& o : world.objects) {
    objects.push_back({{"id", o.id},
                       {"class", sim::to_string(o.category)},
                       {"pose", o.pose},
                       {"vel", o.vel},
                       {"conf", o.conf},
                       {"cov", matrix_to_json(o.cov)},
                       {"frames_stationary", o.frames_stationary}});
  }
  return json{
      {"timestamp", world.timestamp},
      {"ego_pose",
       {{"position", world.ego_pose.pose.position},
        {"yaw", world.ego_pose.pose.yaw},
        {"cov", matrix_to_json(world.ego_pose.cov)}}},
      {"objects", std::move(objects)},
      {"relations", world.relations},
      {"health", {{"degraded_sensors", world.health.degraded_sensors}}},
  };
}

WorldModel world_model_from_wire(const json& j) {
  check_keys(j, {"timestamp", "ego_pose", "objects", "relations", "health"}, "world model");
  WorldModel wm;
  try {
    wm.timestamp = j.at("timestamp").get<double>();
    const json& ego = j.at("ego_pose");
    check_keys(ego, {"position", "yaw", "cov"}, "ego_pose");
    wm.ego_pose.pose.position = ego.at("position").get<Vec3>();
    wm.ego_pose.pose.yaw = ego.at("yaw").get<double>();
    wm.ego_pose.cov = matrix_from_json<3>(ego.at("cov"), "ego_pose.cov");

    std::set<std::string> ids;
    for (const auto& oj : j.at("objects")) {
      check_keys(oj, {"id", "class", "pose", "vel", "conf", "cov", "frames_stationary"}, "object");
      WorldObject o;
      o.id = oj.at("id").get<std::string>();
      o.category = sim::category_from_string(oj.at("class").get<std::string>());
      o.pose = oj.at("pose").get<Vec3>();
      o.vel = oj.at("vel").get<Vec3>();
      o.conf = oj.at("conf").get<double>();
      o.cov = matrix_from_json<6>(oj.at("cov"), "object.cov");
      o.frames_stationary = oj.value("frames_stationary", 0u);
      if (o.conf < 0.0 || o.conf > 1.0) {
        throw Error(ErrorCode::validation_error, "object " + o.id + ": conf outside [0,1]");
      }
      if (!ids.insert(o.id).second) {
        throw Error(ErrorCode::validation_error, "duplicate object id " + o.id);
      }
      wm.objects.push_back(std::move(o));
    }
    wm.relations = j.at("relations").get<std::vector<Relation>>();
    const json& health = j.at("health");
    check_keys(health, {"degraded_sensors"}, "health");
    wm.health.degraded_sensors = health.at("degraded_sensors").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("world model: ") + e.what());
  }
  return wm;
}

}  // namespace auav::perception
