#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace auav::reasoning {

enum class CompareOp { lt, le, gt, ge, eq };

const char* to_string(CompareOp op);

using Literal = std::variant<double, bool, std::string>;

// One comparison "step_<k>.<field> <op> <literal>".
struct Comparison {
  int step = 0;
  std::string field;
  CompareOp op = CompareOp::lt;
  Literal literal;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

// A precondition is a conjunction of comparisons joined by "and".
struct Precondition {
  std::string text;
  std::vector<Comparison> terms;

  std::vector<int> referenced_steps() const;
};

// Throws Error(parse_error) naming the offending token.
Precondition parse_precondition(std::string_view text);

// Returns the outputs of a completed step, or nullptr if the step has not completed.
using OutputsLookup = std::function<const nlohmann::json*(int step)>;

struct EvalResult {
  bool value = false;
  std::string diagnostic;  // set when a term is false because a field is missing or mistyped
};

// Comparisons are strict: 15 < 15 is false. A reference to an incomplete step throws
// Error(evaluation_error), which is distinct from a false result.
EvalResult evaluate(const Precondition& pre, const OutputsLookup& lookup);
EvalResult evaluate_all(const std::vector<Precondition>& pres, const OutputsLookup& lookup);

}  // namespace auav::reasoning
