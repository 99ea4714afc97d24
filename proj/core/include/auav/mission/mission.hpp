#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/integration/network.hpp"
#include "auav/reasoning/backend.hpp"
#include "auav/reasoning/react.hpp"
#include "auav/stats/metrics.hpp"
#include "auav/stats/report.hpp"

namespace auav::mission {

inline constexpr int kRunFormatVersion = 1;

// rule_only: Tier-1 detector only. local / cloud: the agent assesses every period.
// hybrid: Tier-1 every period, the (local) agent only when the escalation predicate holds.
enum class TierMode { rule_only, local, cloud, hybrid };
enum class BackendKind { scripted, remote, replay };

const char* to_string(TierMode m);
TierMode tier_mode_from_string(const std::string& s);
const char* to_string(BackendKind b);
BackendKind backend_kind_from_string(const std::string& s);

struct RunConfig {
  std::filesystem::path scenario;
  TierMode tier = TierMode::hybrid;
  BackendKind backend = BackendKind::scripted;
  std::uint64_t seed = 42;
  std::size_t agents = 1;
  std::filesystem::path out_dir = "out";
  integration::NetworkParams network;
  std::optional<std::filesystem::path> memory_dir;  // default <out_dir>/memory
  std::optional<std::filesystem::path> replay_log;  // mission_log.jsonl, for backend=replay
  std::uint64_t assess_every_ticks = 10;
  double backend_timeout_s = 30.0;
  int max_replans = 3;
  reasoning::RemoteConfig remote;                   // backend=remote
  std::shared_ptr<reasoning::Transport> transport;  // backend=remote; HTTP when unset
  // Backend name written into run-log records; replay sets it to the original's.
  std::optional<std::string> backend_label;

  // Throws Error(invalid_argument) naming the problem.
  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

struct MissionSummary {
  std::string mission_id;
  int exit_code = 0;  // 0 ok, 2 aborted, 3 incomplete artifacts
  std::uint64_t ticks = 0;
  std::size_t tier1_records = 0;
  std::size_t tier2_invocations = 0;
  std::size_t backend_calls = 0;
  std::size_t critical_events = 0;  // distinct targets classified critical
  std::size_t alerts = 0;
  bool land_and_deploy_executed = false;
  std::optional<double> detection_to_outbox_wall_s;
  double total_wall_s = 0.0;
  std::optional<reasoning::AbortReport> abort;
  std::vector<std::string> warnings;
  std::vector<stats::RunLogRecord> records;

  // Deterministic fields only (no wall-clock values).
  nlohmann::json to_json() const;
};

// Escalation predicate for the hybrid mode: some person track that is not yet handled
// has been stationary for kPersistenceFrames or carries an "isolated" relation.
bool should_escalate(const perception::WorldModel& world, const std::vector<std::string>& handled = {});

// Runs one scenario and writes sim_events.jsonl, mission_log.jsonl, run_log.jsonl,
// incidents.jsonl, tool_audit.jsonl, outbox/, the memory record, timing.json and
// manifest.json under out_dir. Config errors throw Error(invalid_argument).
MissionSummary run_mission(const RunConfig& config);
// run_mission with tier = hybrid enforced.
MissionSummary run_tiered(const RunConfig& config);

struct ComparisonConfig {
  std::uint64_t seed = 42;
  std::size_t scenes = 44;
  double emergency_rate = 0.25;
  std::filesystem::path out_dir = "out";
  double backend_timeout_s = 30.0;
};

struct ComparisonResult {
  std::vector<stats::RunLogRecord> rule_based;
  std::vector<stats::RunLogRecord> agentic_local;
  std::vector<stats::RunLogRecord> agentic_cloud;
  stats::StatsReport report;
};

// Evaluates the rule-based detector and both scripted agentic tiers on one seeded scene
// pool. Every system sees the same perception output per scene. Writes one run log per
// system, the combined run log and the report (txt, json, csv) under out_dir.
// Throws Error(invalid_argument) when the pool has fewer than 44 scenes.
ComparisonResult run_comparison(const ComparisonConfig& config);

struct Divergence {
  std::string file;
  std::size_t line = 0;  // 1-based; 0 for whole-run problems
  std::string kind;      // digest, mismatch, missing, extra, replay_error
  std::string detail;
};

struct ReplayResult {
  std::size_t exchanges = 0;
  std::vector<Divergence> divergences;
  bool ok() const { return divergences.empty(); }
  nlohmann::json to_json() const;
};

// Re-executes a finished run from its recorded backend replies (no network) into out_dir
// and compares the recomputed mission and run logs with the recorded ones. Exchange
// digests are verified first, so an edited reply is reported at its own line.
// Throws Error(version_mismatch) for an unknown run format and Error(io_error) when the
// run directory is incomplete.
ReplayResult replay(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir);

// Replies recorded in a mission log, in call order.
std::vector<reasoning::RecordedReply> load_recorded_replies(const std::filesystem::path& mission_log);

}  // namespace auav::mission
