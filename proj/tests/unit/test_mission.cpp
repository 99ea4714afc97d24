#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/integration/protocol.hpp"
#include "auav/mission/mission.hpp"
#include "auav/mission/scene_pool.hpp"

using namespace auav;
using namespace auav::mission;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = AUAV_SCENARIO_DIR;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "auav_mission_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig config(const std::string& scenario, const fs::path& out, TierMode tier = TierMode::hybrid) {
  RunConfig c;
  c.scenario = kScenarios / scenario;
  c.out_dir = out;
  c.tier = tier;
  c.seed = 42;
  return c;
}

std::vector<json> log_entries(const fs::path& run, const std::string& type) {
  std::vector<json> out;
  for (auto& e : read_jsonl(run / "mission_log.jsonl")) {
    if (e.value("type", "") == type) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

TEST(Mission, NormalScenarioRaisesNothing) {
  const auto out = scratch("s1");
  const auto s = run_mission(config("scenario1_normal.json", out));
  EXPECT_EQ(s.exit_code, 0);
  EXPECT_EQ(s.alerts, 0u);
  EXPECT_EQ(s.critical_events, 0u);
  EXPECT_EQ(s.tier2_invocations, 0u);
  EXPECT_TRUE(log_entries(out, "escalation").empty());
  EXPECT_TRUE(fs::is_empty(out / "outbox"));
  EXPECT_GT(s.tier1_records, 0u);
}

TEST(Mission, EmergencyScenarioDeploysAndAlertsOnce) {
  const auto out = scratch("s2");
  const auto s = run_mission(config("scenario2_emergency.json", out));
  ASSERT_EQ(s.exit_code, 0);
  EXPECT_EQ(s.critical_events, 1u);
  EXPECT_TRUE(s.land_and_deploy_executed);
  EXPECT_EQ(s.alerts, 1u);
  ASSERT_TRUE(s.detection_to_outbox_wall_s.has_value());
  EXPECT_LT(*s.detection_to_outbox_wall_s, 3.0);

  std::vector<fs::path> files(fs::directory_iterator(out / "outbox"), fs::directory_iterator{});
  ASSERT_EQ(files.size(), 1u);
  const auto msg = std::get<integration::AcpMessage>(integration::decode_message(slurp(files[0])));
  EXPECT_EQ(msg.payload["severity"], "critical");
  for (const char* k : {"lat", "lon", "alt"}) EXPECT_TRUE(msg.payload["gps"].contains(k));
  EXPECT_FALSE(msg.payload["image_ref"].get<std::string>().empty());

  for (const char* f : {"sim_events.jsonl", "mission_log.jsonl", "run_log.jsonl", "incidents.jsonl",
                        "tool_audit.jsonl", "timing.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const bool deployed = [&] {
    for (const auto& e : read_jsonl(out / "sim_events.jsonl")) {
      if (e.value("type", "") == "rescue_kit_deployed") return true;
    }
    return false;
  }();
  EXPECT_TRUE(deployed);
}

TEST(Mission, SameSeedGivesByteIdenticalLogs) {
  const auto out = scratch("det");
  const auto copy = scratch("det_first");
  run_mission(config("scenario2_emergency.json", out));
  fs::create_directories(copy);
  const std::vector<std::string> files{"mission_log.jsonl", "run_log.jsonl", "sim_events.jsonl",
                                       "incidents.jsonl", "manifest.json"};
  for (const auto& f : files) fs::copy_file(out / f, copy / f);
  // A fresh memory directory so the mission id repeats.
  fs::remove_all(out);
  run_mission(config("scenario2_emergency.json", out));
  for (const auto& f : files) EXPECT_EQ(slurp(out / f), slurp(copy / f)) << f;
}

TEST(Mission, ReplayReproducesRun) {
  const auto out = scratch("replay_src");
  run_mission(config("scenario2_emergency.json", out));
  const auto r = replay(out, scratch("replay_out"));
  EXPECT_TRUE(r.ok()) << r.to_json().dump(2);
  EXPECT_GT(r.exchanges, 0u);
}

TEST(Mission, TamperedReplyIsReportedAsDivergence) {
  const auto out = scratch("tamper_src");
  run_mission(config("scenario2_emergency.json", out));
  auto entries = read_jsonl(out / "mission_log.jsonl");
  bool edited = false;
  for (auto& e : entries) {
    if (e.value("type", "") == "exchange" && e.value("task", "") == "assess") {
      e["text"] = e["text"].get<std::string>() + " ";
      edited = true;
      break;
    }
  }
  ASSERT_TRUE(edited);
  {
    JsonlWriter w(out / "mission_log.jsonl");
    for (const auto& e : entries) w.write(e);
  }
  const auto r = replay(out, scratch("tamper_out"));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.divergences.front().kind, "digest");
}

TEST(Mission, ReplayRejectsUnknownFormatVersion) {
  const auto out = scratch("version_src");
  run_mission(config("scenario1_normal.json", out));
  auto m = read_json_file(out / "manifest.json");
  m["format_version"] = 99;
  write_json_file(out / "manifest.json", m);
  try {
    replay(out, scratch("version_out"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::version_mismatch);
  }
}

TEST(Mission, ScriptedRunsNeverTouchTheNetwork) {
  const auto out = scratch("offline");
  auto c = config("scenario2_emergency.json", out, TierMode::cloud);
  auto deny = std::make_shared<reasoning::DenyingTransport>();
  c.transport = deny;
  const auto s = run_mission(c);
  EXPECT_EQ(s.exit_code, 0);
  EXPECT_EQ(deny->attempts(), 0u);
}

TEST(Mission, RemoteBackendFailuresAreReportedNotFatal) {
  const auto out = scratch("remote_denied");
  auto c = config("scenario2_emergency.json", out, TierMode::local);
  c.backend = BackendKind::remote;
  c.remote = {"https://api.example.test/v1", "", "m"};
  auto deny = std::make_shared<reasoning::DenyingTransport>();
  c.transport = deny;
  const auto s = run_mission(c);
  EXPECT_GT(deny->attempts(), 0u);
  EXPECT_FALSE(s.warnings.empty());
  EXPECT_EQ(s.alerts, 0u);
}

TEST(Mission, HybridCallsAtMostFullAgentic) {
  const auto hybrid = run_mission(config("scenario2_emergency.json", scratch("hyb")));
  const auto full = run_mission(config("scenario2_emergency.json", scratch("full"), TierMode::local));
  EXPECT_LE(hybrid.tier2_invocations, full.tier2_invocations);
  EXPECT_LT(hybrid.backend_calls, full.backend_calls);
  EXPECT_EQ(hybrid.alerts, 1u);
  EXPECT_EQ(full.alerts, 1u);
}

TEST(Mission, RuleOnlyNeverCallsBackend) {
  const auto s = run_mission(config("scenario2_emergency.json", scratch("rule"), TierMode::rule_only));
  EXPECT_EQ(s.backend_calls, 0u);
  EXPECT_EQ(s.alerts, 0u);
  for (const auto& r : s.records) EXPECT_EQ(r.system, "rule_based");
}

TEST(Mission, ThreeAgentsAuctionTheRescue) {
  const auto out = scratch("swarm");
  auto c = config("scenario2_emergency.json", out);
  c.agents = 3;
  const auto s = run_mission(c);
  EXPECT_EQ(s.exit_code, 0);
  EXPECT_EQ(s.alerts, 1u);
  const auto auctions = log_entries(out, "auction");
  ASSERT_EQ(auctions.size(), 1u);
  EXPECT_TRUE(auctions[0].contains("winner"));
}

TEST(Mission, MemoryGrowsAcrossRuns) {
  const auto out = scratch("memory");
  const auto mem = out / "shared_memory";
  auto c = config("scenario2_emergency.json", out / "a");
  c.memory_dir = mem;
  const auto first = run_mission(c);
  c.out_dir = out / "b";
  const auto second = run_mission(c);
  EXPECT_NE(first.mission_id, second.mission_id);
  const auto start = log_entries(out / "b", "mission_start");
  ASSERT_EQ(start.size(), 1u);
  EXPECT_EQ(start[0]["memory_before"].size(), 1u);
}

TEST(Mission, BadConfigRejected) {
  auto c = config("scenario1_normal.json", scratch("bad"));
  c.agents = 0;
  EXPECT_THROW(run_mission(c), Error);
  c = config("does_not_exist.json", scratch("bad"));
  EXPECT_THROW(run_mission(c), Error);
}

TEST(Comparison, ThreeSystemsOverFortyFourScenes) {
  ComparisonConfig c;
  c.out_dir = scratch("compare");
  const auto r = run_comparison(c);
  EXPECT_EQ(r.rule_based.size(), 44u);
  EXPECT_EQ(r.agentic_local.size(), 44u);
  EXPECT_EQ(r.agentic_cloud.size(), 44u);
  EXPECT_EQ(read_jsonl(c.out_dir / "run_log.jsonl").size(), 132u);
  for (const char* f : {"report.txt", "report.json", "report.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(c.out_dir / f)) << f;
  }
  ASSERT_TRUE(r.report.time_anova.has_value());
  EXPECT_EQ(r.report.time_anova->df1, 2.0);
  EXPECT_EQ(r.report.time_anova->df2, 129.0);
}

TEST(Comparison, TooFewScenesRejected) {
  ComparisonConfig c;
  c.scenes = 43;
  c.out_dir = scratch("compare_small");
  EXPECT_THROW(run_comparison(c), Error);
}

TEST(ScenePool, EmergencyCountIsExact) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto pool = generate_scene_pool(seed);
    ASSERT_EQ(pool.size(), 44u);
    std::size_t emergencies = 0;
    for (const auto& s : pool) emergencies += is_emergency_scene(s);
    EXPECT_EQ(emergencies, 11u);
  }
}
