#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace auav::stats {

// One evaluated scene for one system. `system` is rule_based, agentic_local or
// agentic_cloud.
struct RunLogRecord {
  std::string system;
  std::string scene_id;
  double processing_time = 0.0;  // seconds
  std::optional<double> detection_confidence;
  std::size_t persons_detected = 0;
  std::size_t persons_present = 0;  // ground truth in view
  std::vector<std::string> recommended_actions;
  std::string surrounding_features;
  std::string severity = "normal";
  std::string tier_source = "tier1";  // which tier produced the record
  std::string backend = "none";
  bool latency_emulated = false;

  // processing_time >= 0 and finite, confidence in [0, 1], known system name.
  void validate() const;

  friend bool operator==(const RunLogRecord&, const RunLogRecord&) = default;
};

inline constexpr std::size_t kContextMinChars = 50;

nlohmann::json to_json(const RunLogRecord& r);
RunLogRecord run_log_record_from_json(const nlohmann::json& j);

std::vector<RunLogRecord> read_run_log(const std::filesystem::path& path);
void write_run_log(const std::filesystem::path& path, std::span<const RunLogRecord> records);

// Percent of records with at least one recommended action. Throws on empty input.
double arr(std::span<const RunLogRecord> records);
// Percent of records whose surrounding_features is longer than min_chars code points.
double car(std::span<const RunLogRecord> records, std::size_t min_chars = kContextMinChars);

bool has_action(const RunLogRecord& r);
bool has_context(const RunLogRecord& r, std::size_t min_chars = kContextMinChars);

}  // namespace auav::stats
