#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/learning/snippet.hpp"
#include "auav/reasoning/prompt.hpp"

namespace auav::learning {

struct MissionRecord {
  std::string mission_id;
  std::string scenario;
  std::vector<nlohmann::json> snapshots;      // world models (wire form), time-ordered
  std::vector<nlohmann::json> step_outcomes;
  std::vector<nlohmann::json> responses;      // agent responses
  std::optional<std::string> feedback;
  double created_at = 0.0;

  // Throws Error(validation_error) on an empty id or out-of-order snapshots.
  void validate() const;
  // Retrieval texts derived from the record: one per distinct response description
  // plus the operator feedback, each capped at kMaxSnippetChars.
  std::vector<std::string> snippet_texts() const;

  friend bool operator==(const MissionRecord&, const MissionRecord&) = default;
};

nlohmann::json to_json(const MissionRecord& r);
MissionRecord mission_record_from_json(const nlohmann::json& j);

// Directory store: missions/<mission_id>.json plus index.json. Single writer; the index
// is reread before every append so sequential processes see each other's records.
class MemoryStore {
 public:
  explicit MemoryStore(std::filesystem::path root);

  // Throws Error(duplicate) if the id is already stored.
  void record(const MissionRecord& record);
  std::optional<MissionRecord> fetch(const std::string& mission_id) const;
  std::vector<std::string> mission_ids() const;  // in append order

  // score = |query tokens ∩ snippet tokens| / |query tokens| over case-folded
  // whitespace tokens. Zero-score snippets are not returned. Ties: most recent
  // mission first, then mission_id ascending, then snippet order within the mission.
  std::vector<ContextSnippet> retrieve(const std::string& query, std::size_t k) const;

  // Stores operator feedback on a mission. No learning happens; returns the number of
  // model parameters updated, which is always zero.
  std::size_t add_feedback(const std::string& mission_id, const std::string& feedback);

  const std::filesystem::path& root() const { return root_; }

 private:
  struct IndexEntry {
    std::string mission_id;
    std::string scenario;
    double created_at = 0.0;
    std::uint64_t seq = 0;
    std::vector<std::string> snippets;
  };
  std::vector<IndexEntry> load_index() const;
  void save_index(const std::vector<IndexEntry>& index) const;
  std::filesystem::path mission_path(const std::string& id) const;

  std::filesystem::path root_;
  mutable std::mutex mutex_;
};

// Token-overlap score used by retrieve().
double overlap_score(const std::string& query, const std::string& snippet);

// Adds snippets to the prompt's context. If the rendered context would exceed
// max_chars code points, the lowest-scored snippets are dropped first (later ones
// first on equal score); the kept ones stay in their given order.
reasoning::Prompt inject_context(reasoning::Prompt prompt, const std::vector<ContextSnippet>& snippets,
                                 std::size_t max_chars = 1500);

}  // namespace auav::learning
