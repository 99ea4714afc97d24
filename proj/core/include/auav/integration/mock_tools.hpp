#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "auav/integration/gateway.hpp"
#include "auav/sim/scenario.hpp"

namespace auav::integration {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  double alt = 0.0;
};

// Local east-north-up metres to geodetic coordinates (flat-earth approximation,
// adequate over a few kilometres).
GeoPoint local_to_geo(const sim::GeoOrigin& origin, const Vec3& local);

// api.weather.get_forecast: returns wind_speed from a fixed table, cycling per call.
// The first fail_first_calls calls throw.
class WeatherService {
 public:
  explicit WeatherService(sim::WeatherSpec spec);
  static ToolDescriptor descriptor();
  nlohmann::json operator()(const ToolCallEnvelope& env, const nlohmann::json& scoped);
  int calls() const { return calls_; }

 private:
  sim::WeatherSpec spec_;
  std::mutex mutex_;
  int calls_ = 0;
};

// db.log_incident: appends one JSON line per incident.
class IncidentLog {
 public:
  explicit IncidentLog(std::filesystem::path path);
  static ToolDescriptor descriptor();
  nlohmann::json operator()(const ToolCallEnvelope& env, const nlohmann::json& scoped);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::unique_ptr<JsonlWriter> writer_;
  std::mutex mutex_;
  int count_ = 0;
};

// alert.dispatch: writes one ACP alert per call to <outbox>/<timestamp_ms>_<call_id>.json.
// The gps position comes from the target object in the scoped world model.
class AlertOutbox {
 public:
  AlertOutbox(std::filesystem::path dir, sim::GeoOrigin origin, std::string sender);
  static ToolDescriptor descriptor();
  nlohmann::json operator()(const ToolCallEnvelope& env, const nlohmann::json& scoped);
  const std::filesystem::path& dir() const { return dir_; }
  int sent() const { return sent_; }

 private:
  std::filesystem::path dir_;
  sim::GeoOrigin origin_;
  std::string sender_;
  std::mutex mutex_;
  int sent_ = 0;
};

struct MockServices {
  std::shared_ptr<WeatherService> weather;
  std::shared_ptr<IncidentLog> incidents;
  std::shared_ptr<AlertOutbox> outbox;
};

// Registers the three mock tools. Outbox files and the incident log go under out_dir.
MockServices register_mock_tools(ToolGateway& gateway, const sim::ScenarioSpec& spec,
                                 const std::filesystem::path& out_dir, const std::string& agent_id);

}  // namespace auav::integration
