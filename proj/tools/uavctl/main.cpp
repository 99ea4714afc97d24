// uavctl: command line front end for missions, tier comparisons, replay and reports.
//
// Exit codes: 0 ok, 1 error, 2 mission aborted, 3 artifacts incomplete, 4 replay diverged.

#include <cstdio>
#include <iostream>
#include <string>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/mission/mission.hpp"
#include "auav/stats/metrics.hpp"
#include "auav/stats/report.hpp"

#include <CLI11.hpp>

namespace {

using namespace auav;
namespace fs = std::filesystem;

struct RunArgs {
  std::string scenario;
  std::uint64_t seed = 42;
  std::string tier = "hybrid";
  std::string backend = "scripted";
  std::string out = "out/run";
  std::size_t agents = 1;
  double net_latency = 0.05;
  double net_drop = 0.0;
  std::string memory;
  double timeout = 30.0;
};

void add_run_options(CLI::App* cmd, RunArgs& a, bool with_tier) {
  cmd->add_option("--scenario", a.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", a.seed, "Master seed");
  if (with_tier) {
    cmd->add_option("--tier", a.tier, "rule_only | local | cloud | hybrid")
        ->check(CLI::IsMember({"rule_only", "local", "cloud", "hybrid"}));
  }
  cmd->add_option("--backend", a.backend, "scripted | remote")->check(CLI::IsMember({"scripted", "remote"}));
  cmd->add_option("--out", a.out, "Output directory");
  cmd->add_option("--agents", a.agents, "Number of UAV agents")->check(CLI::PositiveNumber);
  cmd->add_option("--net-latency", a.net_latency, "Inter-agent one-way latency (s)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--net-drop", a.net_drop, "Inter-agent message drop probability")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--memory", a.memory, "Mission memory directory (default <out>/memory)");
  cmd->add_option("--timeout", a.timeout, "Per-call backend timeout (s)")->check(CLI::PositiveNumber);
}

mission::RunConfig to_config(const RunArgs& a) {
  mission::RunConfig c;
  c.scenario = a.scenario;
  c.tier = mission::tier_mode_from_string(a.tier);
  c.backend = mission::backend_kind_from_string(a.backend);
  c.seed = a.seed;
  c.agents = a.agents;
  c.out_dir = a.out;
  c.network.latency_s = a.net_latency;
  c.network.drop_prob = a.net_drop;
  if (!a.memory.empty()) c.memory_dir = a.memory;
  c.backend_timeout_s = a.timeout;
  if (c.backend == mission::BackendKind::remote) c.remote = reasoning::RemoteConfig::from_env();
  return c;
}

int report_mission(const mission::MissionSummary& s) {
  std::cout << s.to_json().dump(2) << "\n";
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
  return s.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agentic UAV mission runner"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one mission");
  add_run_options(run, run_args, true);

  RunArgs tiered_args;
  auto* tiered = app.add_subcommand("tiered", "Run one mission with rule-based screening and selective escalation");
  add_run_options(tiered, tiered_args, false);

  mission::ComparisonConfig cmp;
  std::string cmp_out = "out/compare";
  auto* compare = app.add_subcommand("compare", "Compare rule-based, local and cloud systems on a scene pool");
  compare->add_option("--seed", cmp.seed, "Master seed");
  compare->add_option("--scenes", cmp.scenes, "Scene pool size (>= 44)");
  compare->add_option("--emergency-rate", cmp.emergency_rate, "Share of scenes with a collapsed person")
      ->check(CLI::Range(0.0, 1.0));
  compare->add_option("--out", cmp_out, "Output directory");

  std::string replay_run;
  std::string replay_out;
  auto* replay = app.add_subcommand("replay", "Re-execute a run from its recorded backend replies");
  replay->add_option("run_dir", replay_run, "Directory of the recorded run")->required()->check(CLI::ExistingDirectory);
  replay->add_option("--out", replay_out, "Output directory (default <run_dir>/replay)");

  std::vector<std::string> report_logs;
  std::string report_out;
  double alpha = 0.05;
  auto* report = app.add_subcommand("report", "Statistical report from one or more run logs");
  report->add_option("run_logs", report_logs, "run_log.jsonl files")->required()->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "Write report.txt/.json/.csv here as well");
  report->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return report_mission(mission::run_mission(to_config(run_args)));
    if (*tiered) {
      tiered_args.tier = "hybrid";
      return report_mission(mission::run_tiered(to_config(tiered_args)));
    }
    if (*compare) {
      cmp.out_dir = cmp_out;
      const auto result = mission::run_comparison(cmp);
      std::cout << stats::render_text(result.report);
      return 0;
    }
    if (*replay) {
      const fs::path out = replay_out.empty() ? fs::path(replay_run) / "replay" : fs::path(replay_out);
      const auto result = mission::replay(replay_run, out);
      std::cout << result.to_json().dump(2) << "\n";
      return result.ok() ? 0 : 4;
    }
    if (*report) {
      std::vector<stats::RunLogRecord> records;
      for (const auto& path : report_logs) {
        auto part = stats::read_run_log(path);
        records.insert(records.end(), part.begin(), part.end());
      }
      const auto r = stats::generate_report(records, alpha);
      if (!report_out.empty()) {
        fs::create_directories(report_out);
        write_file_atomic(fs::path(report_out) / "report.txt", stats::render_text(r));
        write_file_atomic(fs::path(report_out) / "report.csv", stats::render_csv(r));
        write_json_file(fs::path(report_out) / "report.json", stats::to_json(r));
      }
      std::cout << stats::render_text(r);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "uavctl: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "uavctl: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
