#include "auav/reasoning/precondition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "auav/common/error.hpp"

namespace auav::reasoning {

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::eq: return "==";
  }
  return "?";
}

std::vector<int> Precondition::referenced_steps() const {
  std::vector<int> out;
  for (const auto& t : terms) out.push_back(t.step);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::parse_error, "precondition '" + std::string(s_) + "': " + what +
                                            " at offset " + std::to_string(pos_));
  }

  bool accept(std::string_view word) {
    skip_ws();
    if (s_.substr(pos_, word.size()) == word) {
      pos_ += word.size();
      return true;
    }
    return false;
  }

  std::string_view identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return s_.substr(start, pos_ - start);
  }

  Comparison comparison() {
    skip_ws();
    if (!accept("step_")) fail("expected step_<k>");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected step number");
    Comparison c;
    std::from_chars(s_.data() + start, s_.data() + pos_, c.step);
    if (peek() != '.') fail("expected '.'");
    ++pos_;
    c.field = std::string(identifier());
    if (accept("<=")) c.op = CompareOp::le;
    else if (accept(">=")) c.op = CompareOp::ge;
    else if (accept("==")) c.op = CompareOp::eq;
    else if (accept("<")) c.op = CompareOp::lt;
    else if (accept(">")) c.op = CompareOp::gt;
    else fail("expected comparator");
    c.literal = literal();
    return c;
  }

  Literal literal() {
    skip_ws();
    const char q = peek();
    if (q == '"' || q == '\'') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != q) ++pos_;
      if (pos_ >= s_.size()) fail("unterminated string");
      std::string out(s_.substr(start, pos_ - start));
      ++pos_;
      return out;
    }
    if (accept("true")) return true;
    if (accept("false")) return false;
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '.' || s_[pos_] == '-' || s_[pos_] == '+' ||
                                s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
    }
    if (start == pos_) fail("expected literal");
    // from_chars for double is available in libstdc++ 11.
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || end != s_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("bad number");
    }
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

bool word_boundary(std::string_view rest) {
  return rest.empty() || std::isspace(static_cast<unsigned char>(rest.front()));
}

template <typename T>
bool compare(const T& a, CompareOp op, const T& b) {
  switch (op) {
    case CompareOp::lt: return a < b;
    case CompareOp::le: return a <= b;
    case CompareOp::gt: return a > b;
    case CompareOp::ge: return a >= b;
    case CompareOp::eq: return a == b;
  }
  return false;
}

}  // namespace

Precondition parse_precondition(std::string_view text) {
  Precondition p;
  p.text = std::string(text);
  Cursor c(text);
  if (c.done()) c.fail("empty expression");
  p.terms.push_back(c.comparison());
  while (!c.done()) {
    if (!c.accept("and") || !word_boundary(text.substr(c.pos()))) c.fail("expected 'and'");
    p.terms.push_back(c.comparison());
  }
  return p;
}

EvalResult evaluate(const Precondition& pre, const OutputsLookup& lookup) {
  for (const auto& t : pre.terms) {
    const nlohmann::json* outputs = lookup(t.step);
    if (outputs == nullptr) {
      throw Error(ErrorCode::evaluation_error,
                  "precondition '" + pre.text + "' references incomplete step " +
                      std::to_string(t.step));
    }
    if (!outputs->is_object() || !outputs->contains(t.field)) {
      return {false, "step_" + std::to_string(t.step) + " has no output '" + t.field + "'"};
    }
    const nlohmann::json& v = outputs->at(t.field);
    bool ok = false;
    bool typed = true;
    if (const double* d = std::get_if<double>(&t.literal)) {
      if (v.is_number()) ok = compare(v.get<double>(), t.op, *d);
      else typed = false;
    } else if (const bool* b = std::get_if<bool>(&t.literal)) {
      if (v.is_boolean() && t.op == CompareOp::eq) ok = v.get<bool>() == *b;
      else typed = false;
    } else {
      const auto& s = std::get<std::string>(t.literal);
      if (v.is_string()) ok = compare(v.get<std::string>(), t.op, s);
      else typed = false;
    }
    if (!typed) {
      return {false, "step_" + std::to_string(t.step) + "." + t.field +
                         " has a type incompatible with the literal"};
    }
    if (!ok) return {false, ""};
  }
  return {true, ""};
}

EvalResult evaluate_all(const std::vector<Precondition>& pres, const OutputsLookup& lookup) {
  for (const auto& p : pres) {
    EvalResult r = evaluate(p, lookup);
    if (!r.value) return r;
  }
  return {true, ""};
}

}  // namespace auav::reasoning
