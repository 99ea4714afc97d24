#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "auav/common/error.hpp"
#include "auav/common/rng.hpp"
#include "auav/common/text.hpp"
#include "auav/learning/memory.hpp"
#include "auav/reasoning/prompt.hpp"

using namespace auav;
using namespace auav::learning;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempStore {
  fs::path path;
  explicit TempStore(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove_all(path); }
  ~TempStore() { fs::remove_all(path); }
};

MissionRecord mission(std::string id, std::vector<std::string> descriptions) {
  MissionRecord r;
  r.mission_id = std::move(id);
  r.scenario = "test";
  r.snapshots = {json{{"timestamp", 0.1}}, json{{"timestamp", 0.2}}};
  for (auto& d : descriptions) {
    r.responses.push_back({{"severity", "normal"}, {"surrounding_features", d}, {"recommended_actions", json::array()}});
  }
  return r;
}

std::set<std::string> token_set(const std::string& s) {
  const auto t = text::tokenize(s);
  return {t.begin(), t.end()};
}

}  // namespace

TEST(Memory, RecordFetchRoundTrip) {
  TempStore dir("auav_mem_rt");
  MemoryStore store(dir.path);
  auto r = mission("M-1", {"crowd near the gate"});
  r.step_outcomes = {json{{"step_id", 1}, {"status", "success"}}};
  r.created_at = 3.5;
  store.record(r);
  EXPECT_EQ(store.fetch("M-1"), r);
  EXPECT_FALSE(store.fetch("M-2").has_value());
  EXPECT_EQ(mission_record_from_json(to_json(r)), r);
}

TEST(Memory, DuplicateIdRejected) {
  TempStore dir("auav_mem_dup");
  MemoryStore store(dir.path);
  store.record(mission("M-1", {}));
  try {
    store.record(mission("M-1", {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::duplicate);
  }
}

TEST(Memory, InvalidRecordsRejected) {
  auto r = mission("", {});
  EXPECT_THROW(r.validate(), Error);
  r = mission("M-1", {});
  r.snapshots = {json{{"timestamp", 2.0}}, json{{"timestamp", 1.0}}};
  EXPECT_THROW(r.validate(), Error);
}

TEST(Memory, SurvivesReopen) {
  TempStore dir("auav_mem_restart");
  {
    MemoryStore store(dir.path);
    store.record(mission("M-1", {"person collapsed near the fountain"}));
    store.record(mission("M-2", {"light traffic on the concourse"}));
  }
  MemoryStore reopened(dir.path);
  EXPECT_EQ(reopened.mission_ids(), (std::vector<std::string>{"M-1", "M-2"}));
  const auto hits = reopened.retrieve("collapsed fountain", 5);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].mission_id, "M-1");
}

TEST(Memory, FeedbackStoredWithoutLearning) {
  TempStore dir("auav_mem_fb");
  MemoryStore store(dir.path);
  store.record(mission("M-1", {}));
  EXPECT_EQ(store.add_feedback("M-1", "operator says the alert was correct"), 0u);
  EXPECT_EQ(store.fetch("M-1")->feedback, "operator says the alert was correct");
  EXPECT_EQ(store.retrieve("alert correct", 3).size(), 1u);
  EXPECT_THROW(store.add_feedback("M-9", "x"), Error);
}

TEST(Retrieve, ZeroKIsEmpty) {
  TempStore dir("auav_mem_k0");
  MemoryStore store(dir.path);
  store.record(mission("M-1", {"gate crowd"}));
  EXPECT_TRUE(store.retrieve("gate", 0).empty());
}

TEST(Retrieve, OwnSnippetScoresOne) {
  TempStore dir("auav_mem_self");
  MemoryStore store(dir.path);
  const auto r = mission("M-1", {"Person motionless beside the kiosk"});
  store.record(r);
  const auto text = r.snippet_texts().at(0);
  const auto hits = store.retrieve(text, 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_DOUBLE_EQ(hits[0].score, 1.0);
  EXPECT_EQ(hits[0].text, text);
}

TEST(Retrieve, SnippetsCappedAtFiveHundredCodePoints) {
  std::string long_text;
  for (int i = 0; i < 400; ++i) long_text += "\xC3\xA9 ";
  const auto r = mission("M-1", {long_text});
  for (const auto& s : r.snippet_texts()) EXPECT_LE(text::utf8_length(s), kMaxSnippetChars);
}

TEST(RetrieveProperty, RankingMatchesBruteForce) {
  const std::vector<std::string> vocab{"person", "collapsed", "gate", "crowd", "kiosk", "wind",
                                       "alert", "rescue", "exit", "calm"};
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    TempStore dir("auav_mem_prop");
    MemoryStore store(dir.path);
    struct Item {
      std::string mission;
      std::size_t order;
      std::size_t pos;
      std::string text;
    };
    std::vector<Item> items;
    const auto n = 1 + rng.below(6);
    for (std::uint64_t m = 0; m < n; ++m) {
      std::vector<std::string> descs;
      const auto count = rng.below(3);
      for (std::uint64_t d = 0; d < count; ++d) {
        std::string s;
        const auto words = 1 + rng.below(5);
        for (std::uint64_t w = 0; w < words; ++w) s += vocab[rng.below(vocab.size())] + " ";
        descs.push_back(s);
      }
      const auto r = mission("M-" + std::to_string(rng.below(1000)) + "-" + std::to_string(m), descs);
      store.record(r);
      const auto texts = r.snippet_texts();
      for (std::size_t i = 0; i < texts.size(); ++i) items.push_back({r.mission_id, m, i, texts[i]});
    }
    std::string query;
    for (int w = 0; w < 3; ++w) query += vocab[rng.below(vocab.size())] + " ";
    const auto q = token_set(query);

    struct Expected {
      double score;
      const Item* item;
    };
    std::vector<Expected> expected;
    for (const auto& it : items) {
      const auto s = token_set(it.text);
      std::size_t common = 0;
      for (const auto& t : q) common += s.count(t);
      const double score = double(common) / double(q.size());
      if (score > 0) expected.push_back({score, &it});
    }
    std::sort(expected.begin(), expected.end(), [](const Expected& a, const Expected& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.item->order != b.item->order) return a.item->order > b.item->order;
      return a.item->pos < b.item->pos;
    });
    const std::size_t k = 1 + rng.below(5);
    const auto got = store.retrieve(query, k);
    ASSERT_EQ(got.size(), std::min(k, expected.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_DOUBLE_EQ(got[i].score, expected[i].score) << trial;
      ASSERT_EQ(got[i].mission_id, expected[i].item->mission);
      ASSERT_EQ(got[i].text, expected[i].item->text);
    }
  }
}

TEST(OverlapScore, MonotoneInSharedTokens) {
  const std::string q = "person collapsed near gate";
  EXPECT_DOUBLE_EQ(overlap_score(q, "nothing here"), 0.0);
  EXPECT_DOUBLE_EQ(overlap_score(q, "PERSON"), 0.25);
  EXPECT_DOUBLE_EQ(overlap_score(q, "person collapsed"), 0.5);
  EXPECT_DOUBLE_EQ(overlap_score(q, "gate person collapsed near"), 1.0);
  EXPECT_DOUBLE_EQ(overlap_score("", "anything"), 0.0);
}

TEST(InjectContext, CapDropsLowestScoredFirst) {
  reasoning::Prompt p;
  std::vector<ContextSnippet> s{{"M-1", std::string(400, 'x'), 0.9},
                                {"M-2", std::string(400, 'y'), 0.2},
                                {"M-3", std::string(400, 'z'), 0.5},
                                {"M-4", std::string(400, 'w'), 0.7}};
  const auto out = inject_context(p, s, 1500);
  std::size_t total = 0;
  for (const auto& c : out.context) total += c.text.size();
  EXPECT_LE(total, 1500u);
  ASSERT_EQ(out.context.size(), 3u);
  EXPECT_EQ(out.context[0].mission_id, "M-1");
  EXPECT_EQ(out.context[1].mission_id, "M-3");
  EXPECT_EQ(out.context[2].mission_id, "M-4");
}

TEST(InjectContext, UnderCapKeepsEverything) {
  std::vector<ContextSnippet> s{{"M-1", "short", 0.1}, {"M-2", "also short", 0.3}};
  EXPECT_EQ(inject_context({}, s).context, s);
}
