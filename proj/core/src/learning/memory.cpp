#include "auav/learning/memory.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/common/text.hpp"

namespace auav::learning {

namespace fs = std::filesystem;

void MissionRecord::validate() const {
  if (mission_id.empty()) throw Error(ErrorCode::validation_error, "mission_id is empty");
  if (mission_id.find_first_of("/\\") != std::string::npos || mission_id == "." || mission_id == "..") {
    throw Error(ErrorCode::validation_error, "mission_id '" + mission_id + "' is not a plain name");
  }
  double last = -std::numeric_limits<double>::infinity();
  for (const auto& s : snapshots) {
    const double t = s.value("timestamp", last);
    if (t < last) throw Error(ErrorCode::validation_error, "snapshots are not time-ordered");
    last = t;
  }
}

std::vector<std::string> MissionRecord::snippet_texts() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto add = [&](const std::string& t) {
    if (text::trim(t).empty()) return;
    std::string capped = text::truncate_utf8(t, kMaxSnippetChars);
    if (seen.insert(capped).second) out.push_back(std::move(capped));
  };
  for (const auto& r : responses) {
    const std::string features = r.value("surrounding_features", "");
    if (features.empty()) continue;
    std::string t = r.value("severity", "normal") + ": " + features;
    const auto actions = r.value("recommended_actions", nlohmann::json::array());
    if (!actions.empty()) {
      t += " Actions:";
      for (std::size_t i = 0; i < actions.size(); ++i) {
        t += (i == 0 ? " " : "; ") + actions[i].get<std::string>();
      }
      t += ".";
    }
    add(t);
  }
  for (const auto& o : step_outcomes) {
    if (o.value("status", "") == "failed") {
      add("step " + std::to_string(o.value("step_id", 0)) + " failed: " + o.value("failure_reason", ""));
    }
  }
  if (feedback) add(*feedback);
  return out;
}

nlohmann::json to_json(const MissionRecord& r) {
  nlohmann::json j = {{"mission_id", r.mission_id}, {"scenario", r.scenario},
                      {"snapshots", r.snapshots},   {"step_outcomes", r.step_outcomes},
                      {"responses", r.responses},   {"created_at", r.created_at}};
  j["feedback"] = r.feedback ? nlohmann::json(*r.feedback) : nlohmann::json(nullptr);
  return j;
}

MissionRecord mission_record_from_json(const nlohmann::json& j) {
  MissionRecord r;
  r.mission_id = field::get<std::string>(j, "mission_id", "mission");
  r.scenario = field::get_or<std::string>(j, "scenario", "mission", "");
  r.snapshots = field::get_or<std::vector<nlohmann::json>>(j, "snapshots", "mission", {});
  r.step_outcomes = field::get_or<std::vector<nlohmann::json>>(j, "step_outcomes", "mission", {});
  r.responses = field::get_or<std::vector<nlohmann::json>>(j, "responses", "mission", {});
  if (j.contains("feedback") && !j.at("feedback").is_null()) {
    r.feedback = field::get<std::string>(j, "feedback", "mission");
  }
  r.created_at = field::get_or<double>(j, "created_at", "mission", 0.0);
  return r;
}

MemoryStore::MemoryStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "missions", ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create memory store at " + root_.string());
}

fs::path MemoryStore::mission_path(const std::string& id) const {
  return root_ / "missions" / (id + ".json");
}

std::vector<MemoryStore::IndexEntry> MemoryStore::load_index() const {
  std::vector<IndexEntry> out;
  const fs::path path = root_ / "index.json";
  if (!fs::exists(path)) return out;
  const json j = read_json_file(path);
  for (const auto& e : j.at("missions")) {
    out.push_back({e.at("mission_id").get<std::string>(), e.value("scenario", ""),
                   e.value("created_at", 0.0), e.at("seq").get<std::uint64_t>(),
                   e.value("snippets", std::vector<std::string>{})});
  }
  return out;
}

void MemoryStore::save_index(const std::vector<IndexEntry>& index) const {
  json missions = json::array();
  for (const auto& e : index) {
    missions.push_back({{"mission_id", e.mission_id},
                        {"scenario", e.scenario},
                        {"created_at", e.created_at},
                        {"seq", e.seq},
                        {"snippets", e.snippets}});
  }
  write_json_file(root_ / "index.json", {{"version", 1}, {"missions", std::move(missions)}});
}

void MemoryStore::record(const MissionRecord& record) {
  record.validate();
  std::lock_guard lock(mutex_);
  auto index = load_index();
  for (const auto& e : index) {
    if (e.mission_id == record.mission_id) {
      throw Error(ErrorCode::duplicate, "mission '" + record.mission_id + "' already recorded");
    }
  }
  if (fs::exists(mission_path(record.mission_id))) {
    throw Error(ErrorCode::duplicate, "mission file for '" + record.mission_id + "' already exists");
  }
  write_json_file(mission_path(record.mission_id), to_json(record));
  const std::uint64_t seq = index.empty() ? 1 : index.back().seq + 1;
  index.push_back({record.mission_id, record.scenario, record.created_at, seq, record.snippet_texts()});
  save_index(index);
}

std::optional<MissionRecord> MemoryStore::fetch(const std::string& mission_id) const {
  std::lock_guard lock(mutex_);
  const fs::path path = mission_path(mission_id);
  if (mission_id.empty() || !fs::exists(path)) return std::nullopt;
  return mission_record_from_json(read_json_file(path));
}

std::vector<std::string> MemoryStore::mission_ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& e : load_index()) out.push_back(e.mission_id);
  return out;
}

double overlap_score(const std::string& query, const std::string& snippet) {
  const auto q = text::tokenize(query);
  const std::set<std::string> qs(q.begin(), q.end());
  if (qs.empty()) return 0.0;
  const auto s = text::tokenize(snippet);
  const std::set<std::string> ss(s.begin(), s.end());
  std::size_t hits = 0;
  for (const auto& t : qs) hits += ss.contains(t) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(qs.size());
}

std::vector<ContextSnippet> MemoryStore::retrieve(const std::string& query, std::size_t k) const {
  if (k == 0) return {};
  std::vector<IndexEntry> index;
  {
    std::lock_guard lock(mutex_);
    index = load_index();
  }
  struct Scored {
    ContextSnippet snippet;
    std::uint64_t seq;
    std::size_t pos;
  };
  std::vector<Scored> all;
  for (const auto& e : index) {
    for (std::size_t i = 0; i < e.snippets.size(); ++i) {
      const double score = overlap_score(query, e.snippets[i]);
      if (score > 0.0) all.push_back({{e.mission_id, e.snippets[i], score}, e.seq, i});
    }
  }
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) {
    if (a.snippet.score != b.snippet.score) return a.snippet.score > b.snippet.score;
    if (a.seq != b.seq) return a.seq > b.seq;
    if (a.snippet.mission_id != b.snippet.mission_id) return a.snippet.mission_id < b.snippet.mission_id;
    return a.pos < b.pos;
  });
  std::vector<ContextSnippet> out;
  for (std::size_t i = 0; i < all.size() && i < k; ++i) out.push_back(all[i].snippet);
  return out;
}

std::size_t MemoryStore::add_feedback(const std::string& mission_id, const std::string& feedback) {
  std::lock_guard lock(mutex_);
  const fs::path path = mission_path(mission_id);
  if (!fs::exists(path)) throw Error(ErrorCode::not_found, "no mission '" + mission_id + "'");
  MissionRecord r = mission_record_from_json(read_json_file(path));
  r.feedback = feedback;
  write_json_file(path, to_json(r));
  auto index = load_index();
  for (auto& e : index) {
    if (e.mission_id == mission_id) e.snippets = r.snippet_texts();
  }
  save_index(index);
  return 0;
}

namespace {

std::size_t rendered_size(const ContextSnippet& s) {
  // Matches the prompt rendering "[mission <id>] <text>\n".
  return text::utf8_length("[mission " + s.mission_id + "] " + s.text + "\n");
}

}  // namespace

reasoning::Prompt inject_context(reasoning::Prompt prompt, const std::vector<ContextSnippet>& snippets,
                                 std::size_t max_chars) {
  if (snippets.empty()) return prompt;
  std::vector<bool> keep(snippets.size(), true);
  std::size_t total = 0;
  for (const auto& s : prompt.context) total += rendered_size(s);
  for (const auto& s : snippets) total += rendered_size(s);

  std::vector<std::size_t> order(snippets.size());
  std::iota(order.begin(), order.end(), 0);
  // Drop order: lowest score first; on equal score the later snippet goes first.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (snippets[a].score != snippets[b].score) return snippets[a].score < snippets[b].score;
    return a > b;
  });
  for (std::size_t idx : order) {
    if (total <= max_chars) break;
    keep[idx] = false;
    total -= rendered_size(snippets[idx]);
  }
  for (std::size_t i = 0; i < snippets.size(); ++i) {
    if (keep[i]) prompt.context.push_back(snippets[i]);
  }
  return prompt;
}

}  // namespace auav::learning
