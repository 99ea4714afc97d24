#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/common/error.hpp"
#include "auav/common/rng.hpp"
#include "auav/reasoning/policy.hpp"
#include "auav/reasoning/prompt.hpp"
#include "auav/reasoning/response.hpp"

namespace auav::reasoning {

enum class Tier { rule, local, cloud };

const char* to_string(Tier t);
Tier tier_from_string(const std::string& s);

struct BackendReply {
  std::string text;
  double latency_s = 0.0;         // reported latency (emulated for the scripted backend)
  bool latency_emulated = false;
  double wall_clock_s = 0.0;      // measured around the call
  bool latency_recorded = false;  // latency_s was read from a log and is kept as is
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  // Implementations honour timeout_s where they block; invoke_backend enforces it as well.
  virtual BackendReply complete(const Prompt& prompt, double timeout_s) = 0;
};

// Calls the backend, measures wall-clock time and maps failures onto typed errors:
// Error(timeout) when the call exceeds timeout_s, Error(transport) for anything
// thrown that is not already an auav::Error.
BackendReply invoke_backend(Backend& backend, const Prompt& prompt, double timeout_s);

// ---- scripted backend --------------------------------------------------------------

// Emission profile for one emulated tier. The probabilities apply to scenes that are
// not emergencies; an emergency always yields actions and a long description.
struct TierProfile {
  double latency_mean_s = 0.0;
  double latency_sd_s = 0.0;
  double p_action = 0.0;
  double p_context = 0.0;
  double confidence_mean = 0.0;
  double confidence_sd = 0.08;

  static TierProfile for_tier(Tier t);
};

inline constexpr std::uint32_t kPersistenceFrames = 12;

// A person object that has been stationary for kPersistenceFrames and is isolated.
std::vector<std::string> emergency_candidates(const perception::WorldModel& world);

// Decides which routine (non-emergency) assessments carry an action and a long
// description. Error diffusion with a seeded phase: over any run of m routine scenes
// the emitted count is within one of m * p, so short runs track the profile rates.
class EmissionSchedule {
 public:
  EmissionSchedule(double p_action, double p_context, Rng& rng);
  explicit EmissionSchedule(const TierProfile& profile, Rng& rng)
      : EmissionSchedule(profile.p_action, profile.p_context, rng) {}

  bool next_action() { return step(action_acc_, p_action_); }
  bool next_context() { return step(context_acc_, p_context_); }

 private:
  static bool step(double& acc, double p);
  double p_action_;
  double p_context_;
  double action_acc_;
  double context_acc_;
};

AgentResponse scripted_respond(const perception::WorldModel& world, Tier tier, Rng& rng,
                               EmissionSchedule& schedule);
PolicyGraph scripted_plan(const std::string& goal, const perception::WorldModel& world,
                          const std::string& plan_id);
// Rule table: a failed weather query (or a weather-gated precondition) defers the flight
// behind a loiter and a fresh weather query; a geofence rejection re-issues the flight
// clamped to the geofence; any other failure replaces the step with a report.
PolicyGraph scripted_reflect(const PolicyGraph& plan, int failed_step, const std::string& reason,
                             const std::string& plan_id);

class ScriptedBackend : public Backend {
 public:
  ScriptedBackend(Tier tier, std::uint64_t seed);

  std::string name() const override { return "scripted"; }
  BackendReply complete(const Prompt& prompt, double timeout_s) override;

  Tier tier() const { return tier_; }
  const TierProfile& profile() const { return profile_; }
  // The next n replies are unparseable text, for exercising retry paths.
  void inject_garbage(int n) { garbage_ = n; }
  std::uint64_t calls() const { return calls_; }

 private:
  Tier tier_;
  TierProfile profile_;
  Rng response_rng_;
  Rng latency_rng_;
  EmissionSchedule schedule_;
  int garbage_ = 0;
  std::uint64_t calls_ = 0;
  std::uint64_t plans_ = 0;
};

// ---- remote backend ----------------------------------------------------------------

struct HttpRequest {
  std::string url;
  std::map<std::string, std::string> headers;
  std::string body;
  double timeout_s = 30.0;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

// Real HTTP(S) via cpp-httplib. Throws Error(transport) on connection failure.
std::shared_ptr<Transport> make_http_transport();

// Refuses every request. Used to prove code paths stay offline.
class DenyingTransport : public Transport {
 public:
  HttpResponse post(const HttpRequest& request) override;
  std::uint64_t attempts() const { return attempts_; }

 private:
  std::uint64_t attempts_ = 0;
};

struct RemoteConfig {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string api_key;
  std::string model;

  // Reads AGENT_API_BASE, AGENT_API_KEY, AGENT_MODEL.
  static RemoteConfig from_env();
  // Throws Error(invalid_argument) when base_url or model is missing.
  void validate() const;
};

// Chat-completions style POST to <base_url>/chat/completions.
class RemoteBackend : public Backend {
 public:
  RemoteBackend(RemoteConfig config, std::shared_ptr<Transport> transport);

  std::string name() const override { return "remote"; }
  BackendReply complete(const Prompt& prompt, double timeout_s) override;

  // Request/response bodies with the credential redacted.
  std::vector<nlohmann::json> exchanges() const;

 private:
  RemoteConfig config_;
  std::shared_ptr<Transport> transport_;
  mutable std::mutex mutex_;
  std::vector<nlohmann::json> exchanges_;
};

// ---- replay backend ----------------------------------------------------------------

struct RecordedReply {
  std::string task;  // PromptTask name the reply answered
  std::string text;
  double latency_s = 0.0;
  bool latency_emulated = false;
  // A call that failed is replayed as the same typed error.
  std::optional<ErrorCode> error_code;
  std::string error;
};

// Returns recorded replies in order. Never touches the network.
class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(std::vector<RecordedReply> replies);

  std::string name() const override { return "replay"; }
  BackendReply complete(const Prompt& prompt, double timeout_s) override;
  std::size_t consumed() const { return next_; }
  std::size_t remaining() const { return replies_.size() - next_; }

 private:
  std::vector<RecordedReply> replies_;
  std::size_t next_ = 0;
};

}  // namespace auav::reasoning
