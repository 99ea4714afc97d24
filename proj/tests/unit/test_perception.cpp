#include <gtest/gtest.h>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "auav/common/rng.hpp"
#include "auav/perception/detector.hpp"
#include "auav/perception/kalman.hpp"
#include "auav/perception/pipeline.hpp"
#include "auav/perception/relations.hpp"
#include "auav/perception/tracker.hpp"
#include "auav/perception/world_model.hpp"
#include "auav/reasoning/backend.hpp"

using namespace auav;
using namespace auav::perception;

namespace {

Track make_track(std::string id, Vec3 p, Vec3 v = {}, Category c = Category::person) {
  Track t;
  t.id = std::move(id);
  t.category = c;
  t.state_mean << p.x, p.y, p.z, v.x, v.y, v.z;
  return t;
}

Detection det(Vec3 p, double conf = 0.8) {
  Detection d;
  d.position = p;
  d.confidence = conf;
  return d;
}

sim::EntityState entity(std::string id, Vec3 p, sim::Category c = sim::Category::person) {
  sim::EntityState e;
  e.id = std::move(id);
  e.category = c;
  e.pose.position = p;
  return e;
}

}  // namespace

// ---- detector ----

TEST(Detector, FullMissRateYieldsNothing) {
  DetectorParams p;
  p.miss_rate = 1.0;
  p.false_positive_rate = 0.0;
  Rng rng(1);
  std::vector<sim::VisibleEntity> vis{{entity("a", {1, 2, 0}), 10.0}, {entity("b", {3, 2, 0}), 11.0}};
  EXPECT_TRUE(simulate_detector(vis, p, rng).empty());
}

TEST(Detector, NoiselessSingleDetectionIsExact) {
  DetectorParams p;
  p.miss_rate = 0.0;
  p.false_positive_rate = 0.0;
  p.position_noise_sd = 0.0;
  Rng rng(1);
  std::vector<sim::VisibleEntity> vis{{entity("a", {1, 2, 0}), 10.0}};
  const auto d = simulate_detector(vis, p, rng);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].position, (Vec3{1, 2, 0}));
  EXPECT_EQ(d[0].source_entity.value_or(""), "a");
  EXPECT_GE(d[0].confidence, 0.0);
  EXPECT_LE(d[0].confidence, 1.0);
}

TEST(Detector, DefaultRatesOverManyScenes) {
  DetectorParams p;
  p.false_positive_rate = 0.0;
  Rng rng(2024);
  std::vector<sim::VisibleEntity> vis;
  for (int i = 0; i < 7; ++i) vis.push_back({entity("p" + std::to_string(i), {double(i), 0, 0}), 30.0});
  std::size_t found = 0, total = 0;
  double conf = 0.0;
  for (int scene = 0; scene < 44 * 20; ++scene) {
    const auto d = simulate_detector(vis, p, rng);
    found += d.size();
    total += vis.size();
    for (const auto& x : d) conf += x.confidence;
  }
  EXPECT_NEAR(double(found) / double(total), 0.75, 0.02);
  EXPECT_NEAR(conf / double(found), 0.716, 0.01);
}

TEST(Detector, LandmarksNeverDetected) {
  DetectorParams p;
  p.miss_rate = 0.0;
  p.false_positive_rate = 0.0;
  Rng rng(1);
  std::vector<sim::VisibleEntity> vis{{entity("gate", {0, 0, 0}, sim::Category::landmark), 5.0}};
  EXPECT_TRUE(simulate_detector(vis, p, rng).empty());
}

// ---- association ----

TEST(Associate, NoTracksFlagsAllDetections) {
  std::vector<Detection> d{det({0, 0, 0}), det({5, 0, 0})};
  const auto a = associate({}, d, 1.0);
  EXPECT_TRUE(a.pairs.empty());
  EXPECT_EQ(a.unassigned, (std::vector<std::size_t>{0, 1}));
}

TEST(Associate, EquidistantTieGoesToSmallerId) {
  std::vector<Track> t{make_track("P-02", {1, 0, 0}), make_track("P-01", {-1, 0, 0})};
  std::vector<Detection> d{det({0, 0, 0})};
  const auto a = associate(t, d, 2.0);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(t[a.pairs[0].first].id, "P-01");
}

namespace {

// Every maximal matching inside the gate, scored by its ascending distance list;
// greedy nearest-neighbour picks the lexicographically smallest one.
std::vector<std::pair<std::size_t, std::size_t>> lexmin_matching(const std::vector<Track>& t,
                                                                 const std::vector<Detection>& d,
                                                                 double gate) {
  std::vector<std::pair<std::size_t, std::size_t>> best;
  std::vector<double> best_key;
  bool have = false;
  std::vector<int> assign(t.size(), -1);  // -1 unmatched
  std::vector<bool> used(d.size(), false);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == t.size()) {
      // maximality: no unmatched track/detection pair within the gate
      for (std::size_t a = 0; a < t.size(); ++a) {
        if (assign[a] != -1) continue;
        for (std::size_t b = 0; b < d.size(); ++b) {
          if (!used[b] && distance(t[a].position(), d[b].position) < gate) return;
        }
      }
      std::vector<double> key;
      std::vector<std::pair<std::size_t, std::size_t>> m;
      for (std::size_t a = 0; a < t.size(); ++a) {
        if (assign[a] < 0) continue;
        key.push_back(distance(t[a].position(), d[assign[a]].position));
        m.emplace_back(a, assign[a]);
      }
      std::sort(key.begin(), key.end());
      if (!have || key < best_key) {
        have = true;
        best_key = key;
        best = m;
      }
      return;
    }
    assign[i] = -1;
    rec(i + 1);
    for (std::size_t b = 0; b < d.size(); ++b) {
      if (used[b] || distance(t[i].position(), d[b].position) >= gate) continue;
      used[b] = true;
      assign[i] = static_cast<int>(b);
      rec(i + 1);
      used[b] = false;
      assign[i] = -1;
    }
  };
  rec(0);
  return best;
}

}  // namespace

TEST(Associate, MatchesExhaustiveOracleOnSmallInstances) {
  Rng rng(77);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t nt = 1 + rng.below(4), nd = 1 + rng.below(4);
    std::vector<Track> t;
    std::vector<Detection> d;
    for (std::size_t i = 0; i < nt; ++i) {
      t.push_back(make_track("P-" + std::to_string(10 + i), {rng.uniform(0, 4), rng.uniform(0, 4), 0}));
    }
    for (std::size_t i = 0; i < nd; ++i) d.push_back(det({rng.uniform(0, 4), rng.uniform(0, 4), 0}));
    const double gate = rng.uniform(0.5, 3.0);
    const auto a = associate(t, d, gate);
    for (const auto& [ti, di] : a.pairs) ASSERT_LT(distance(t[ti].position(), d[di].position), gate);
    auto expected = lexmin_matching(t, d, gate);
    std::sort(expected.begin(), expected.end());
    ASSERT_EQ(a.pairs, expected) << "trial " << trial;
    ASSERT_EQ(a.pairs.size() + a.unassigned.size(), nd);
  }
}

TEST(Associate, DistinctGatesGiveBijection) {
  std::vector<Track> t{make_track("A", {0, 0, 0}), make_track("B", {10, 0, 0}), make_track("C", {20, 0, 0})};
  std::vector<Detection> d{det({20.2, 0, 0}), det({0.1, 0, 0}), det({9.7, 0, 0})};
  const auto a = associate(t, d, 1.0);
  using P = std::pair<std::size_t, std::size_t>;
  EXPECT_EQ(a.pairs, (std::vector<P>{{0, 1}, {1, 2}, {2, 0}}));
  EXPECT_TRUE(a.unassigned.empty());
}

// ---- Kalman filter ----

TEST(Kalman, ZeroDtZeroNoiseIsIdentity) {
  auto t = make_track("a", {1, 2, 3}, {4, 5, 6});
  const auto out = kf_predict(t, 0.0, Matrix6::Zero());
  EXPECT_EQ(out.state_mean, t.state_mean);
  EXPECT_EQ(out.covariance, t.covariance);
}

TEST(Kalman, ConstantVelocityShift) {
  const auto out = kf_predict(make_track("a", {0, 0, 0}, {1, 0, 0}), 1.0, Matrix6::Zero());
  EXPECT_DOUBLE_EQ(out.state_mean(0), 1.0);
  EXPECT_DOUBLE_EQ(out.state_mean(1), 0.0);
}

TEST(Kalman, PredictCovarianceMatchesDirectEvaluation) {
  auto t = make_track("a", {0, 0, 0});
  t.covariance = Matrix6::Identity();
  const auto out = kf_predict(t, 1.0, Matrix6::Identity() * 0.1);
  Matrix6 F = Matrix6::Identity();
  for (int i = 0; i < 3; ++i) F(i, i + 3) = 1.0;
  const Matrix6 expected = F * F.transpose() + Matrix6::Identity() * 0.1;
  EXPECT_LT((out.covariance - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kalman, NonPsdProcessNoiseRejected) {
  Matrix6 Q = Matrix6::Zero();
  Q(0, 0) = -1.0;
  EXPECT_THROW(kf_predict(make_track("a", {}), 0.1, Q), Error);
}

TEST(Kalman, ZeroInnovationKeepsMean) {
  auto t = make_track("a", {1, 2, 3}, {0.5, 0, 0});
  const auto r = kf_update(t, det({1, 2, 3}), Matrix3::Identity());
  ASSERT_TRUE(r.applied);
  EXPECT_LT((r.track.state_mean - t.state_mean).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kalman, UnitPriorUnitNoiseHalvesVariance) {
  auto t = make_track("a", {0, 0, 0});
  t.covariance = Matrix6::Identity();
  const auto r = kf_update(t, det({1, 1, 1}), Matrix3::Identity());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.track.covariance(i, i), 0.5, 1e-15);
  EXPECT_NEAR(r.track.state_mean(0), 0.5, 1e-15);
}

TEST(Kalman, TwelveStationaryUpdatesCountTwelve) {
  auto t = make_track("a", {2, 2, 0});
  t.covariance = Matrix6::Identity() * 0.01;
  const Matrix6 Q = white_acceleration_noise(0.001, 0.1);
  for (int i = 0; i < 12; ++i) {
    t = kf_predict(t, 0.1, Q);
    t = kf_update(t, det({2, 2, 0}), Matrix3::Identity() * 1e-4).track;
  }
  EXPECT_EQ(t.frames_stationary, 12u);
  EXPECT_EQ(t.frames_seen, 12u);
}

TEST(Kalman, MovingTrackResetsStationaryCount) {
  auto t = make_track("a", {0, 0, 0}, {1, 0, 0});
  t.frames_stationary = 5;
  t.covariance = Matrix6::Identity();
  const auto r = kf_update(t, det({1, 0, 0}), Matrix3::Identity() * 0.01);
  EXPECT_EQ(r.track.frames_stationary, 0u);
}

TEST(Kalman, SingularInnovationSkipsUpdate) {
  auto t = make_track("a", {0, 0, 0});
  t.covariance = Matrix6::Zero();
  const auto r = kf_update(t, det({1, 0, 0}), Matrix3::Zero());
  EXPECT_FALSE(r.applied);
  EXPECT_FALSE(r.health_note.empty());
}

TEST(KalmanProperty, CovariancePsdAndContractingOverTenThousandCycles) {
  Rng rng(123456);
  auto t = make_track("a", {0, 0, 0});
  t.covariance = Matrix6::Identity() * 4.0;
  for (int cycle = 0; cycle < 10000; ++cycle) {
    if (cycle % 500 == 0) {
      // fresh track with a random SPD prior
      Eigen::Matrix<double, 6, 6> A;
      for (int i = 0; i < 36; ++i) A(i / 6, i % 6) = rng.normal();
      t.covariance = A * A.transpose() + Matrix6::Identity() * 1e-3;
    }
    const double dt = rng.uniform(0.0, 1.0);
    t = kf_predict(t, dt, white_acceleration_noise(rng.uniform(0.0, 2.0), dt));
    ASSERT_TRUE(is_symmetric_psd(t.covariance)) << "after predict " << cycle;
    ASSERT_EQ(Eigen::LLT<Matrix6>(t.covariance + Matrix6::Identity() * 1e-12).info(), Eigen::Success);

    Eigen::Matrix3d B;
    for (int i = 0; i < 9; ++i) B(i / 3, i % 3) = rng.normal() * rng.uniform(0.01, 2.0);
    const Matrix3 R = B * B.transpose() + Matrix3::Identity() * 1e-6;
    const Matrix6 prior = t.covariance;
    const auto r = kf_update(t, det({rng.normal(0, 5), rng.normal(0, 5), rng.normal(0, 5)}), R);
    ASSERT_TRUE(r.applied);
    t = r.track;
    ASSERT_TRUE(is_symmetric_psd(t.covariance)) << "after update " << cycle;
    for (int i = 0; i < 3; ++i) ASSERT_LE(t.covariance(i, i), prior(i, i) * (1 + 1e-9) + 1e-12);
    ASSERT_LE(t.frames_stationary, t.frames_seen);
  }
}

// ---- relations ----

TEST(Relations, EmptyTracks) { EXPECT_TRUE(derive_relations({}, {}, 5.0).empty()); }

TEST(Relations, NearLandmark) {
  std::vector<Track> t{make_track("P-01", {2, 0, 0})};
  std::vector<Landmark> l{{"Exit-3", {0, 0, 0}}};
  const auto r = derive_relations(t, l, 5.0);
  EXPECT_NE(std::find(r.begin(), r.end(), Relation{"P-01", "near", "Exit-3"}), r.end());
}

TEST(Relations, IsolatedPerson) {
  std::vector<Track> t{make_track("P-01", {0, 0, 0}), make_track("P-02", {1, 0, 0}),
                       make_track("P-03", {30, 0, 0})};
  const auto r = derive_relations(t, {}, 5.0);
  EXPECT_EQ(r, (std::vector<Relation>{{"P-03", "isolated", kCrowd}}));
}

TEST(Relations, IsolationBoundaryIsInclusive) {
  std::vector<Track> t{make_track("P-01", {0, 0, 0}), make_track("P-02", {8, 0, 0})};
  EXPECT_EQ(derive_relations(t, {}, 5.0).size(), 2u);
}

// ---- world model ----

TEST(WorldModel, ZeroTracks) {
  const auto wm = emit_world_model({}, {}, EgoEstimate{}, Health{}, 1.0, 10);
  EXPECT_TRUE(wm.objects.empty());
  EXPECT_TRUE(wm.relations.empty());
}

TEST(WorldModel, VehicleObjectWireShape) {
  auto t = make_track("V-01", {5, 5, 0}, {1, 0, 0}, Category::vehicle);
  t.confidence = 0.92;
  t.last_update_tick = 10;
  Health h;
  h.degraded_sensors = {"thermal"};
  const auto wm = emit_world_model(std::vector<Track>{t}, {}, EgoEstimate{}, h, 1.0, 10);
  const auto j = to_wire(wm);
  ASSERT_EQ(j["objects"].size(), 1u);
  const auto& o = j["objects"][0];
  EXPECT_EQ(o["class"], "vehicle");
  EXPECT_DOUBLE_EQ(o["conf"].get<double>(), 0.92);
  for (const char* k : {"id", "pose", "vel", "cov"}) EXPECT_TRUE(o.contains(k)) << k;
  EXPECT_EQ(j["health"]["degraded_sensors"], nlohmann::json::array({"thermal"}));
  for (const char* k : {"timestamp", "ego_pose", "objects", "relations", "health"}) EXPECT_TRUE(j.contains(k));
}

TEST(WorldModel, StaleTracksExcluded) {
  auto fresh = make_track("P-01", {0, 0, 0});
  fresh.last_update_tick = 100;
  auto stale = make_track("P-02", {3, 0, 0});
  stale.last_update_tick = 69;
  const auto wm = emit_world_model(std::vector<Track>{fresh, stale}, {}, EgoEstimate{}, Health{}, 10.0, 100, 30);
  ASSERT_EQ(wm.objects.size(), 1u);
  EXPECT_EQ(wm.objects[0].id, "P-01");
}

TEST(WorldModel, WireRoundTripOnPipelineOutput) {
  sim::ScenarioSpec s;
  s.name = "rt";
  s.duration_ticks = 200;
  s.geofence = Box{{-50, -50, 0}, {50, 50, 100}};
  s.ego_start.position = {0, 0, 30};
  s.degraded_sensors = {"thermal"};
  for (int i = 0; i < 5; ++i) {
    sim::EntitySpec e;
    e.id = "p" + std::to_string(i);
    e.pose.position = {double(i) * 2.0, 0, 0};
    e.behavior = sim::Behavior::walk({{double(i) * 2.0, 20, 0}}, 1.0);
    s.entities.push_back(e);
  }
  sim::EntitySpec lm;
  lm.id = "Exit-3";
  lm.category = sim::Category::landmark;
  lm.pose.position = {3, 3, 0};
  s.entities.push_back(lm);
  auto w = sim::make_initial_state(s);
  PerceptionPipeline p({}, Rng(8));
  for (int i = 0; i < 100; ++i) {
    w = sim::step(std::move(w), 0.1);
    const auto f = p.process(w);
    const auto wire = to_wire(f.world);
    ASSERT_EQ(world_model_from_wire(wire), f.world);
    ASSERT_EQ(to_wire(world_model_from_wire(nlohmann::json::parse(wire.dump()))), wire);
    std::set<std::string> ids;
    for (const auto& o : f.world.objects) {
      ASSERT_TRUE(ids.insert(o.id).second);
      ASSERT_GE(o.conf, 0.0);
      ASSERT_LE(o.conf, 1.0);
      ASSERT_TRUE(is_symmetric_psd(o.cov));
    }
  }
}

TEST(Pipeline, CollapsedIsolatedPersonBecomesEmergencyCandidate) {
  sim::ScenarioSpec s;
  s.name = "e";
  s.duration_ticks = 100;
  s.geofence = Box{{-50, -50, 0}, {50, 50, 100}};
  s.ego_start.position = {0, 0, 30};
  for (int i = 0; i < 4; ++i) {
    sim::EntitySpec e;
    e.id = "w" + std::to_string(i);
    e.pose.position = {-10.0 + 1.8 * i, 0, 0};
    e.behavior = sim::Behavior::walk({{-10.0 + 1.8 * i, 20, 0}}, 1.2);
    s.entities.push_back(e);
  }
  sim::EntitySpec v;
  v.id = "victim";
  v.pose.position = {12, -5, 0};
  v.behavior = sim::Behavior::collapse_at(0);
  s.entities.push_back(v);
  auto w = sim::make_initial_state(s);
  PerceptionPipeline p({}, Rng(3));
  std::size_t first_candidate_tick = 0;
  for (int i = 0; i < 60 && first_candidate_tick == 0; ++i) {
    w = sim::step(std::move(w), 0.1);
    const auto f = p.process(w);
    if (!reasoning::emergency_candidates(f.world).empty()) first_candidate_tick = w.tick;
    for (const auto& o : f.world.objects) {
      if (o.frames_stationary < reasoning::kPersistenceFrames) continue;
      ASSERT_GE(o.frames_stationary, 12u);
    }
  }
  // Birth needs 2 detections, persistence needs 12 stationary updates after that.
  ASSERT_GT(first_candidate_tick, 12u);
  ASSERT_LT(first_candidate_tick, 40u);
}
