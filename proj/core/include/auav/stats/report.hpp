#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auav/stats/metrics.hpp"
#include "auav/stats/tests.hpp"

namespace auav::stats {

struct SystemSummary {
  std::string system;
  std::size_t n = 0;
  double time_mean = 0.0;
  double time_sd = 0.0;
  std::optional<double> confidence_mean;
  std::size_t confidence_n = 0;
  std::size_t persons_detected = 0;  // per record capped at persons_present
  std::size_t persons_present = 0;
  std::size_t with_actions = 0;
  std::size_t with_context = 0;
  double arr = 0.0;
  double car = 0.0;
  std::string backend;
  bool latency_emulated = false;
};

struct NamedTukeyPair {
  std::string a;
  std::string b;
  TukeyPair pair;
};

struct PairwiseEffect {
  std::string a;
  std::string b;
  double cohens_d = 0.0;
  MannWhitneyResult mwu;
  double rank_biserial = 0.0;
};

struct RateTest {
  ChiSquareResult chi2;
  double cramers_v = 0.0;
};

struct NormalityCheck {
  std::string system;
  ShapiroWilkResult sw;
};

struct StatsReport {
  std::vector<SystemSummary> systems;  // rule_based, agentic_local, agentic_cloud order
  std::optional<AnovaResult> time_anova;
  std::vector<NamedTukeyPair> time_tukey;
  std::optional<AnovaResult> confidence_anova;
  std::optional<RateTest> arr_test;
  std::optional<RateTest> car_test;
  std::vector<PairwiseEffect> time_effects;
  std::vector<NormalityCheck> normality;
  std::optional<LeveneResult> time_levene;
  std::optional<double> time_power;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;  // provenance of emulated values and what is not measured
};

// Summaries plus every test that the data supports. Tests that cannot run (one system,
// zero variance, an all-zero contingency column) are skipped with a warning.
// Throws Error(invalid_argument) on empty input.
StatsReport generate_report(std::span<const RunLogRecord> records, double alpha = 0.05);

// Six significant digits. Every renderer goes through this, and the JSON holds the
// values it prints, so text, JSON and CSV always show the same numbers.
std::string format_number(double v);

nlohmann::json to_json(const StatsReport& r);
std::string render_text(const StatsReport& r);
// Per-system summary rows for external plotting.
std::string render_csv(const StatsReport& r);

}  // namespace auav::stats
