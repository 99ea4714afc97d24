#pragma once

#include <string>

namespace auav::learning {

// A retrieved piece of past-mission evidence, attributed to its source mission.
struct ContextSnippet {
  std::string mission_id;
  std::string text;  // at most kMaxSnippetChars code points
  double score = 0.0;

  friend bool operator==(const ContextSnippet&, const ContextSnippet&) = default;
};

inline constexpr std::size_t kMaxSnippetChars = 500;

}  // namespace auav::learning
