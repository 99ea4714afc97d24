#include <benchmark/benchmark.h>

#include <vector>

#include "auav/common/rng.hpp"
#include "auav/stats/distributions.hpp"
#include "auav/stats/tests.hpp"

using namespace auav;
using namespace auav::stats;

static const std::vector<double> kMeans{2.95e-5, 1.48, 4.95};
static const std::vector<double> kSds{9.4e-6, 0.58, 1.15};
static const std::vector<double> kNs{44, 44, 44};

static void BM_AnovaFromSummary(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(anova_from_summary(kMeans, kSds, kNs));
}
BENCHMARK(BM_AnovaFromSummary);

static void BM_StudentizedRangeSf(benchmark::State& state) {
  double q = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(studentized_range_sf(q, 3, 129));
    q = q > 6.0 ? 1.0 : q + 0.37;
  }
}
BENCHMARK(BM_StudentizedRangeSf);

static void BM_TukeyThreeBy44(benchmark::State& state) {
  Rng rng(1);
  std::vector<Sample> g(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 44; ++j) g[i].push_back(rng.normal(kMeans[i], kSds[i]));
  for (auto _ : state) benchmark::DoNotOptimize(tukey_hsd(g));
}
BENCHMARK(BM_TukeyThreeBy44);

static void BM_PosthocPower(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(posthoc_power_anova(kMeans, kSds, kNs));
}
BENCHMARK(BM_PosthocPower);

static void BM_MannWhitneyExact(benchmark::State& state) {
  Rng rng(2);
  Sample a, b;
  for (int i = 0; i < state.range(0); ++i) {
    a.push_back(rng.uniform(0, 10));
    b.push_back(rng.uniform(1, 11));
  }
  for (auto _ : state) benchmark::DoNotOptimize(mann_whitney_u(a, b, MwuMethod::exact));
}
BENCHMARK(BM_MannWhitneyExact)->Arg(7)->Arg(20);
