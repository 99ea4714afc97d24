#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace auav {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  validation_error,
  not_found,
  duplicate,
  safety,
  infeasible,
  degenerate,
  io_error,
  version_mismatch,
  transport,
  timeout,
  evaluation_error,
  aborted,
  tool_failure,
};

std::string_view to_string(ErrorCode code) noexcept;
// Inverse of to_string. Unknown names throw Error(parse_error).
ErrorCode error_code_from_string(std::string_view name);

// Library-wide exception. The code lets callers branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace auav
