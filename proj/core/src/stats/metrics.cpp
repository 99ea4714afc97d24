#include "auav/stats/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/common/text.hpp"

namespace auav::stats {

namespace {

bool known_system(const std::string& s) {
  return s == "rule_based" || s == "agentic_local" || s == "agentic_cloud";
}

double percent(std::span<const RunLogRecord> records, auto&& pred) {
  if (records.empty()) throw Error(ErrorCode::invalid_argument, "no records");
  const auto hits = std::count_if(records.begin(), records.end(), pred);
  return 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
}

}  // namespace

void RunLogRecord::validate() const {
  if (!known_system(system)) throw Error(ErrorCode::validation_error, "unknown system '" + system + "'");
  if (!std::isfinite(processing_time) || processing_time < 0.0) {
    throw Error(ErrorCode::validation_error, "processing_time must be >= 0");
  }
  if (detection_confidence && !(*detection_confidence >= 0.0 && *detection_confidence <= 1.0)) {
    throw Error(ErrorCode::validation_error, "detection_confidence must be in [0, 1]");
  }
}

nlohmann::json to_json(const RunLogRecord& r) {
  json j{{"system", r.system},
         {"scene_id", r.scene_id},
         {"processing_time", r.processing_time},
         {"persons_detected", r.persons_detected},
         {"persons_present", r.persons_present},
         {"recommended_actions", r.recommended_actions},
         {"surrounding_features", r.surrounding_features},
         {"severity", r.severity},
         {"tier_source", r.tier_source},
         {"backend", r.backend},
         {"latency_emulated", r.latency_emulated}};
  j["detection_confidence"] = r.detection_confidence ? json(*r.detection_confidence) : json(nullptr);
  return j;
}

RunLogRecord run_log_record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::parse_error, "run log record must be an object");
  RunLogRecord r;
  r.system = field::get<std::string>(j, "system", "");
  r.scene_id = field::get<std::string>(j, "scene_id", "");
  r.processing_time = field::get<double>(j, "processing_time", "");
  if (j.contains("detection_confidence") && !j["detection_confidence"].is_null()) {
    r.detection_confidence = field::get<double>(j, "detection_confidence", "");
  }
  r.persons_detected = field::get_or<std::size_t>(j, "persons_detected", "", 0);
  r.persons_present = field::get_or<std::size_t>(j, "persons_present", "", 0);
  r.recommended_actions = field::get_or<std::vector<std::string>>(j, "recommended_actions", "", {});
  r.surrounding_features = field::get_or<std::string>(j, "surrounding_features", "", "");
  r.severity = field::get_or<std::string>(j, "severity", "", "normal");
  r.tier_source = field::get_or<std::string>(j, "tier_source", "", "tier1");
  r.backend = field::get_or<std::string>(j, "backend", "", "none");
  r.latency_emulated = field::get_or<bool>(j, "latency_emulated", "", false);
  r.validate();
  return r;
}

std::vector<RunLogRecord> read_run_log(const std::filesystem::path& path) {
  std::vector<RunLogRecord> out;
  for (const auto& j : read_jsonl(path)) out.push_back(run_log_record_from_json(j));
  return out;
}

void write_run_log(const std::filesystem::path& path, std::span<const RunLogRecord> records) {
  JsonlWriter w(path);
  for (const auto& r : records) w.write(to_json(r));
}

bool has_action(const RunLogRecord& r) { return !r.recommended_actions.empty(); }

bool has_context(const RunLogRecord& r, std::size_t min_chars) {
  return text::utf8_length(r.surrounding_features) > min_chars;
}

double arr(std::span<const RunLogRecord> records) {
  return percent(records, [](const RunLogRecord& r) { return has_action(r); });
}

double car(std::span<const RunLogRecord> records, std::size_t min_chars) {
  return percent(records, [&](const RunLogRecord& r) { return has_context(r, min_chars); });
}

}  // namespace auav::stats
