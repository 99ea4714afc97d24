#include <benchmark/benchmark.h>

#include <vector>

#include "auav/common/rng.hpp"
#include "auav/perception/kalman.hpp"
#include "auav/perception/tracker.hpp"

using namespace auav;
using namespace auav::perception;

static void BM_KalmanPredictUpdate(benchmark::State& state) {
  Track t;
  t.id = "P-01";
  const Matrix6 Q = white_acceleration_noise(0.001, 0.1);
  const Matrix3 R = Matrix3::Identity() * 1e-4;
  Detection d;
  d.position = {1.0, 2.0, 0.0};
  d.confidence = 0.8;
  for (auto _ : state) {
    t = kf_predict(t, 0.1, Q);
    t = kf_update(t, d, R).track;
    benchmark::DoNotOptimize(t.covariance.data());
  }
}
BENCHMARK(BM_KalmanPredictUpdate);

static void BM_Associate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  std::vector<Track> tracks(n);
  std::vector<Detection> dets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-50, 50), y = rng.uniform(-50, 50);
    tracks[i].id = "P-" + std::to_string(i);
    tracks[i].state_mean << x, y, 0, 0, 0, 0;
    dets[i].position = {x + rng.normal(0, 0.1), y + rng.normal(0, 0.1), 0};
  }
  for (auto _ : state) benchmark::DoNotOptimize(associate(tracks, dets, 0.75));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Associate)->RangeMultiplier(4)->Range(4, 256)->Complexity();

static void BM_TrackerTick(benchmark::State& state) {
  Rng rng(9);
  std::vector<Detection> dets(static_cast<std::size_t>(state.range(0)));
  for (auto& d : dets) d.position = {rng.uniform(-50, 50), rng.uniform(-50, 50), 0};
  Tracker tracker;
  std::uint64_t tick = 0;
  for (auto _ : state) {
    tracker.update(dets, ++tick, 0.1);
    benchmark::DoNotOptimize(tracker.tentative_count());
  }
}
BENCHMARK(BM_TrackerTick)->Arg(8)->Arg(64);
