#include <benchmark/benchmark.h>

#include <filesystem>

#include "auav/mission/mission.hpp"

using namespace auav::mission;
namespace fs = std::filesystem;

static void run_scenario(benchmark::State& state, const char* scenario, TierMode tier) {
  const auto out = fs::temp_directory_path() / "auav_bench_mission";
  RunConfig c;
  c.scenario = fs::path(AUAV_SCENARIO_DIR) / scenario;
  c.tier = tier;
  for (auto _ : state) {
    state.PauseTiming();
    fs::remove_all(out);
    c.out_dir = out;
    state.ResumeTiming();
    benchmark::DoNotOptimize(run_mission(c));
  }
  fs::remove_all(out);
}

static void BM_EmergencyHybrid(benchmark::State& state) {
  run_scenario(state, "scenario2_emergency.json", TierMode::hybrid);
}
BENCHMARK(BM_EmergencyHybrid)->Unit(benchmark::kMillisecond);

static void BM_EmergencyFullAgentic(benchmark::State& state) {
  run_scenario(state, "scenario2_emergency.json", TierMode::local);
}
BENCHMARK(BM_EmergencyFullAgentic)->Unit(benchmark::kMillisecond);

static void BM_NormalRuleOnly(benchmark::State& state) {
  run_scenario(state, "scenario1_normal.json", TierMode::rule_only);
}
BENCHMARK(BM_NormalRuleOnly)->Unit(benchmark::kMillisecond);
