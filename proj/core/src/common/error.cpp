#include "auav/common/error.hpp"

namespace auav {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::validation_error: return "validation_error";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::duplicate: return "duplicate";
    case ErrorCode::safety: return "safety";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::version_mismatch: return "version_mismatch";
    case ErrorCode::transport: return "transport";
    case ErrorCode::timeout: return "timeout";
    case ErrorCode::evaluation_error: return "evaluation_error";
    case ErrorCode::aborted: return "aborted";
    case ErrorCode::tool_failure: return "tool_failure";
  }
  return "unknown";
}

ErrorCode error_code_from_string(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::tool_failure); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == name) return code;
  }
  throw Error(ErrorCode::parse_error, "unknown error code '" + std::string(name) + "'");
}

}  // namespace auav
