#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace auav::reasoning {

enum class Severity { normal, critical };

const char* to_string(Severity s);
Severity severity_from_string(const std::string& s);

struct DetectionClaim {
  std::string id;
  double confidence = 0.0;  // self-reported, [0, 1]

  friend bool operator==(const DetectionClaim&, const DetectionClaim&) = default;
};

struct AgentResponse {
  std::vector<DetectionClaim> detections;
  Severity severity = Severity::normal;
  std::string surrounding_features;
  std::vector<std::string> recommended_actions;
  std::string rationale;

  friend bool operator==(const AgentResponse&, const AgentResponse&) = default;
};

struct ParsedResponse {
  AgentResponse response;
  std::vector<std::string> warnings;
};

// Accepts a bare JSON object, optionally wrapped in a markdown code fence or surrounded
// by prose. Missing fields take defaults; out-of-range confidences are clipped with a
// warning. Throws Error(parse_error) on unparseable text or wrong field types and
// Error(validation_error) for a critical severity with no recommended actions.
ParsedResponse parse_response(std::string_view raw);

nlohmann::json to_json(const AgentResponse& r);

// Extracts the outermost JSON object from model output (code fences, leading prose).
std::string_view extract_json_object(std::string_view raw);

}  // namespace auav::reasoning
