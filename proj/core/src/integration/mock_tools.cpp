#include "auav/integration/mock_tools.hpp"

#include <cmath>
#include <numbers>

#include "auav/common/error.hpp"
#include "auav/integration/protocol.hpp"

namespace auav::integration {

namespace {

constexpr double kEarthRadius = 6378137.0;

const nlohmann::json* find_object(const nlohmann::json& scoped, const std::string& id) {
  if (!scoped.contains("objects")) return nullptr;
  for (const auto& o : scoped.at("objects")) {
    if (o.value("id", std::string()) == id) return &o;
  }
  return nullptr;
}

}  // namespace

GeoPoint local_to_geo(const sim::GeoOrigin& origin, const Vec3& local) {
  const double deg = 180.0 / std::numbers::pi;
  const double lat0 = origin.lat / deg;
  return {origin.lat + local.y / kEarthRadius * deg,
          origin.lon + local.x / (kEarthRadius * std::cos(lat0)) * deg, origin.alt + local.z};
}

// ---- weather -----------------------------------------------------------------------

WeatherService::WeatherService(sim::WeatherSpec spec) : spec_(std::move(spec)) {
  if (spec_.wind_speeds.empty()) {
    throw Error(ErrorCode::invalid_argument, "weather table needs at least one wind speed");
  }
}

ToolDescriptor WeatherService::descriptor() {
  return {"api.weather.get_forecast", "Current wind forecast at a location (m/s).",
          {{"location", {ArgType::string, false}}}};
}

nlohmann::json WeatherService::operator()(const ToolCallEnvelope& env, const nlohmann::json&) {
  std::lock_guard lock(mutex_);
  const int call = calls_++;
  if (call < spec_.fail_first_calls) {
    throw Error(ErrorCode::tool_failure, "weather service unavailable");
  }
  const double wind =
      spec_.wind_speeds[static_cast<std::size_t>(call - spec_.fail_first_calls) % spec_.wind_speeds.size()];
  return {{"wind_speed", wind}, {"unit", "m/s"}, {"location", env.args.value("location", "")}};
}

// ---- incidents ---------------------------------------------------------------------

IncidentLog::IncidentLog(std::filesystem::path path) : path_(std::move(path)) {
  writer_ = std::make_unique<JsonlWriter>(path_);
}

ToolDescriptor IncidentLog::descriptor() {
  return {"db.log_incident",
          "Append an incident record to the security database.",
          {{"target_id", {ArgType::string, true}},
           {"severity", {ArgType::string, true}},
           {"summary", {ArgType::string, true}}}};
}

nlohmann::json IncidentLog::operator()(const ToolCallEnvelope& env, const nlohmann::json& scoped) {
  std::lock_guard lock(mutex_);
  const std::string incident_id = "INC-" + std::to_string(++count_);
  nlohmann::json record = {{"incident_id", incident_id},
                           {"call_id", env.call_id},
                           {"reported_by", env.issued_by},
                           {"time", env.issued_at},
                           {"target_id", env.args.at("target_id")},
                           {"severity", env.args.at("severity")},
                           {"summary", env.args.at("summary")}};
  if (const auto* o = find_object(scoped, env.args.at("target_id").get<std::string>())) {
    record["position"] = o->at("pose");
  }
  writer_->write(record);
  return {{"incident_id", incident_id}, {"logged", true}};
}

// ---- alerts ------------------------------------------------------------------------

AlertOutbox::AlertOutbox(std::filesystem::path dir, sim::GeoOrigin origin, std::string sender)
    : dir_(std::move(dir)), origin_(origin), sender_(std::move(sender)) {
  std::filesystem::create_directories(dir_);
}

ToolDescriptor AlertOutbox::descriptor() {
  return {"alert.dispatch",
          "Send an alert with GPS position and image reference to the medical team.",
          {{"target_id", {ArgType::string, true}},
           {"severity", {ArgType::string, true}},
           {"summary", {ArgType::string, true}},
           {"recommended_actions", {ArgType::array, false}}}};
}

nlohmann::json AlertOutbox::operator()(const ToolCallEnvelope& env, const nlohmann::json& scoped) {
  const std::string target = env.args.at("target_id").get<std::string>();
  const std::string severity = env.args.at("severity").get<std::string>();
  const nlohmann::json actions = env.args.value("recommended_actions", nlohmann::json::array());
  if (severity == "critical" && actions.empty()) {
    throw Error(ErrorCode::validation_error, "critical alert needs recommended actions");
  }
  const nlohmann::json* object = find_object(scoped, target);
  if (object == nullptr) {
    throw Error(ErrorCode::not_found, "target '" + target + "' not in scoped world model");
  }
  const Vec3 local = object->at("pose").get<Vec3>();
  const GeoPoint gps = local_to_geo(origin_, local);
  const double timestamp = scoped.value("timestamp", env.issued_at);
  const auto ms = static_cast<long long>(std::llround(timestamp * 1000.0));
  const std::string image_ref = "frames/" + std::to_string(ms) + "_" + target + "_annotated.png";

  AcpMessage msg;
  msg.msg_id = "alert-" + env.call_id;
  msg.from = sender_;
  msg.to = "operator";
  msg.kind = AcpMessage::Kind::alert;
  msg.payload = {{"gps", {{"lat", gps.lat}, {"lon", gps.lon}, {"alt", gps.alt}}},
                 {"image_ref", image_ref},
                 {"severity", severity},
                 {"summary", env.args.at("summary")},
                 {"recommended_actions", actions},
                 {"target_id", target},
                 {"local_position", local}};
  const std::string bytes = encode_message(msg);

  std::lock_guard lock(mutex_);
  char name[96];
  std::snprintf(name, sizeof name, "%013lld_%s.json", ms, env.call_id.c_str());
  const auto path = dir_ / name;
  write_file_atomic(path, bytes + "\n");
  ++sent_;
  return {{"alert_file", path.filename().string()},
          {"msg_id", msg.msg_id},
          {"gps", msg.payload.at("gps")},
          {"image_ref", image_ref}};
}

MockServices register_mock_tools(ToolGateway& gateway, const sim::ScenarioSpec& spec,
                                 const std::filesystem::path& out_dir, const std::string& agent_id) {
  MockServices s;
  s.weather = std::make_shared<WeatherService>(spec.weather);
  s.incidents = std::make_shared<IncidentLog>(out_dir / "incidents.jsonl");
  s.outbox = std::make_shared<AlertOutbox>(out_dir / "outbox", spec.origin, agent_id);
  gateway.register_tool(WeatherService::descriptor(),
                        [w = s.weather](const auto& e, const auto& c) { return (*w)(e, c); });
  gateway.register_tool(IncidentLog::descriptor(),
                        [l = s.incidents](const auto& e, const auto& c) { return (*l)(e, c); });
  gateway.register_tool(AlertOutbox::descriptor(),
                        [o = s.outbox](const auto& e, const auto& c) { return (*o)(e, c); });
  return s;
}

}  // namespace auav::integration
