#include "auav/reasoning/response.hpp"

#include <algorithm>
#include <cmath>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"

namespace auav::reasoning {

const char* to_string(Severity s) { return s == Severity::critical ? "critical" : "normal"; }

Severity severity_from_string(const std::string& s) {
  if (s == "normal") return Severity::normal;
  if (s == "critical") return Severity::critical;
  throw Error(ErrorCode::parse_error, "unknown severity '" + s + "'");
}

std::string_view extract_json_object(std::string_view raw) {
  const auto first = raw.find('{');
  const auto last = raw.rfind('}');
  if (first == std::string_view::npos || last == std::string_view::npos || last < first) {
    return {};
  }
  return raw.substr(first, last - first + 1);
}

ParsedResponse parse_response(std::string_view raw) {
  const std::string_view body = extract_json_object(raw);
  if (body.empty()) throw Error(ErrorCode::parse_error, "response contains no JSON object");
  const json j = parse_json_text(body, "agent response");

  ParsedResponse out;
  AgentResponse& r = out.response;
  static const char* known[] = {"detections", "severity", "surrounding_features",
                                "recommended_actions", "rationale"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(std::begin(known), std::end(known), k) == std::end(known)) {
      out.warnings.push_back("ignored unknown field '" + k + "'");
    }
  }

  const json dets = field::get_or<json>(j, "detections", "response", json::array());
  if (!dets.is_array()) field::throw_type_error("response.detections", "expected array");
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const std::string path = field::index("response.detections", i);
    const json& d = dets[i];
    if (!d.is_object()) field::throw_type_error(path, "expected object");
    DetectionClaim c;
    c.id = field::get<std::string>(d, "id", path);
    c.confidence = field::get_or<double>(d, "confidence", path, 0.0);
    if (!std::isfinite(c.confidence)) field::throw_type_error(path, "confidence is not finite");
    if (c.confidence < 0.0 || c.confidence > 1.0) {
      const double clipped = std::clamp(c.confidence, 0.0, 1.0);
      out.warnings.push_back("confidence " + json(c.confidence).dump() + " for " + c.id +
                             " clipped to " + json(clipped).dump());
      c.confidence = clipped;
    }
    r.detections.push_back(std::move(c));
  }
  r.severity = severity_from_string(field::get_or<std::string>(j, "severity", "response", "normal"));
  r.surrounding_features = field::get_or<std::string>(j, "surrounding_features", "response", "");
  r.recommended_actions =
      field::get_or<std::vector<std::string>>(j, "recommended_actions", "response", {});
  r.rationale = field::get_or<std::string>(j, "rationale", "response", "");

  if (r.severity == Severity::critical && r.recommended_actions.empty()) {
    throw Error(ErrorCode::validation_error, "critical response without recommended actions");
  }
  return out;
}

nlohmann::json to_json(const AgentResponse& r) {
  json dets = json::array();
  for (const auto& d : r.detections) dets.push_back({{"id", d.id}, {"confidence", d.confidence}});
  return {{"detections", std::move(dets)},
          {"severity", to_string(r.severity)},
          {"surrounding_features", r.surrounding_features},
          {"recommended_actions", r.recommended_actions},
          {"rationale", r.rationale}};
}

}  // namespace auav::reasoning
