// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero when any
// measurable criterion fails. Criterion 9 covers figures that cannot be measured here and
// passes only when the generated report declares them as not reproduced.

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "auav/common/error.hpp"
#include "auav/common/json_io.hpp"
#include "auav/common/rng.hpp"
#include "auav/integration/auction.hpp"
#include "auav/integration/network.hpp"
#include "auav/integration/protocol.hpp"
#include "auav/mission/mission.hpp"
#include "auav/perception/kalman.hpp"
#include "auav/reasoning/backend.hpp"
#include "auav/reasoning/policy.hpp"
#include "auav/stats/metrics.hpp"
#include "auav/stats/tests.hpp"

using namespace auav;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---- pinned tolerances ----
constexpr double kFLow = 509.0, kFHigh = 519.0;
constexpr double kAnovaMaxSeconds = 1e-3;
constexpr double kCramersV = 0.79, kCramersTol = 0.005;
constexpr double kPowerMin = 0.99;
constexpr double kCloudArr = 92.0, kLocalArr = 79.0, kCloudCar = 94.0, kLocalCar = 88.0;
constexpr double kRateTol = 6.0;
constexpr double kDetectToOutboxMax = 3.0, kMissionWallMax = 30.0;
constexpr double kFixtureTol = 1e-5;
constexpr double kMwuTol = 1e-12;

const fs::path kScenarios = AUAV_SCENARIO_DIR;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "" : "!") + what);
  }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "auav_acceptance" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

mission::RunConfig run_config(const std::string& scenario, const fs::path& out,
                              mission::TierMode tier = mission::TierMode::hybrid) {
  mission::RunConfig c;
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

// Per-system processing-time summaries (seconds).
const std::vector<double> kMeans{2.95e-5, 1.48, 4.95};
const std::vector<double> kSds{9.4e-6, 0.58, 1.15};
const std::vector<double> kNs{44, 44, 44};

// ---- criteria ----

Outcome c1_anova() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = stats::anova_from_summary(kMeans, kSds, kNs);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(r.F >= kFLow && r.F <= kFHigh, "F=" + fmt(r.F, 3) + " in [509,519]");
  o.require(r.df1 == 2 && r.df2 == 129, "df=(" + fmt(r.df1, 0) + "," + fmt(r.df2, 0) + ")");
  o.require(secs < kAnovaMaxSeconds, "time=" + fmt(secs * 1e6, 1) + "us < 1ms");
  return o;
}

Outcome c2_cramers_v() {
  Outcome o;
  const double v = stats::cramers_v(82.92, 132, 3, 2);
  o.require(std::fabs(v - kCramersV) <= kCramersTol, "V=" + fmt(v) + " within 0.79+-0.005");
  return o;
}

Outcome c3_power() {
  Outcome o;
  const double p = stats::posthoc_power_anova(kMeans, kSds, kNs);
  o.require(p > kPowerMin, "power=" + fmt(p, 6) + " > 0.99");
  return o;
}

Outcome c4_rates(const mission::ComparisonResult& cmp) {
  Outcome o;
  const double rule_arr = stats::arr(cmp.rule_based), rule_car = stats::car(cmp.rule_based);
  o.require(rule_arr == 0.0 && rule_car == 0.0,
            "rule_based ARR=" + fmt(rule_arr, 1) + " CAR=" + fmt(rule_car, 1) + " (exact 0)");

  const auto rule_run = mission::run_mission(
      run_config("scenario2_emergency.json", scratch("c4_rule"), mission::TierMode::rule_only));
  const double run_arr = stats::arr(rule_run.records), run_car = stats::car(rule_run.records);
  o.require(run_arr == 0.0 && run_car == 0.0 && rule_run.backend_calls == 0,
            "rule-only run ARR=" + fmt(run_arr, 1) + " CAR=" + fmt(run_car, 1));

  auto band = [&](const char* name, double got, double target) {
    o.require(std::fabs(got - target) <= kRateTol,
              std::string(name) + "=" + fmt(got, 1) + " (" + fmt(target, 0) + "+-6)");
  };
  band("cloud ARR", stats::arr(cmp.agentic_cloud), kCloudArr);
  band("local ARR", stats::arr(cmp.agentic_local), kLocalArr);
  band("cloud CAR", stats::car(cmp.agentic_cloud), kCloudCar);
  band("local CAR", stats::car(cmp.agentic_local), kLocalCar);

  const bool labeled = std::any_of(cmp.report.notes.begin(), cmp.report.notes.end(), [](const std::string& n) {
    return n.find("emulation targets") != std::string::npos;
  });
  o.require(labeled, "report labels agentic rates as emulation targets");
  return o;
}

Outcome c5_emergency() {
  Outcome o;
  const auto out = scratch("c5");
  const auto s = mission::run_mission(run_config("scenario2_emergency.json", out));
  o.require(s.exit_code == 0, "exit=" + std::to_string(s.exit_code));
  o.require(s.critical_events == 1, "critical events=" + std::to_string(s.critical_events));

  // The first critical assessment must concern a track stationary for the full window.
  const auto assessments = log_entries(out, "assessment");
  const auto critical = std::find_if(assessments.begin(), assessments.end(),
                                     [](const json& a) { return a.value("severity", "") == "critical"; });
  std::int64_t still = -1;
  if (critical != assessments.end()) {
    const auto target = (*critical)["target_id"].get<std::string>();
    for (const auto& e : log_entries(out, "escalation")) {
      if (e["tick"] != (*critical)["tick"]) continue;
      for (const auto& obj : e["objects"]) {
        if (obj["id"] == target) still = obj["frames_stationary"].get<std::int64_t>();
      }
    }
  }
  o.require(still >= reasoning::kPersistenceFrames,
            "target frames_stationary=" + std::to_string(still) + " >= " +
                std::to_string(reasoning::kPersistenceFrames));
  o.require(s.land_and_deploy_executed, "land_and_deploy executed");

  std::vector<fs::path> files;
  if (fs::exists(out / "outbox")) files.assign(fs::directory_iterator(out / "outbox"), fs::directory_iterator{});
  bool alert_ok = false;
  if (files.size() == 1) {
    const auto msg = std::get<integration::AcpMessage>(integration::decode_message(slurp(files[0])));
    const auto& gps = msg.payload.value("gps", json::object());
    alert_ok = msg.kind == integration::AcpMessage::Kind::alert && gps.contains("lat") && gps.contains("lon") &&
               gps.contains("alt") && !msg.payload.value("image_ref", std::string()).empty();
  }
  o.require(files.size() == 1 && alert_ok, "outbox alerts=" + std::to_string(files.size()) + " with gps+image_ref");

  const double d2o = s.detection_to_outbox_wall_s.value_or(1e9);
  o.require(d2o < kDetectToOutboxMax, "detect->outbox=" + fmt(d2o * 1e3, 2) + "ms < 3s");
  o.require(s.total_wall_s < kMissionWallMax, "total=" + fmt(s.total_wall_s, 3) + "s < 30s");
  return o;
}

Outcome c6_normal() {
  Outcome o;
  const auto out = scratch("c6");
  const auto s = mission::run_mission(run_config("scenario1_normal.json", out));
  o.require(s.exit_code == 0, "exit=" + std::to_string(s.exit_code));
  o.require(s.alerts == 0, "alerts=" + std::to_string(s.alerts));
  const auto escalations = log_entries(out, "escalation").size();
  o.require(escalations == 0 && s.tier2_invocations == 0, "escalations=" + std::to_string(escalations));
  return o;
}

// ---- criterion 7: published fixtures and brute-force oracles ----

double brute_force_mwu_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> all = a;
  all.insert(all.end(), b.begin(), b.end());
  const std::size_t n = all.size(), n1 = a.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      less += all[j] < all[i];
      equal += all[j] == all[i];
    }
    rank[i] = less + (equal + 1.0) / 2.0;
  }
  auto u_of = [&](unsigned mask) {
    double r = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) r += rank[i];
    return r - n1 * (n1 + 1) / 2.0;
  };
  const double mu = n1 * (n - n1) / 2.0;
  const double dev = std::fabs(u_of((1u << n1) - 1) - mu);
  double total = 0, extreme = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
    ++total;
    extreme += std::fabs(u_of(mask) - mu) >= dev - 1e-9;
  }
  return extreme / total;
}

Outcome c7_oracles() {
  using stats::Sample;
  Outcome o;
  auto near = [](double a, double b, double tol) { return std::fabs(a - b) <= tol; };

  const std::vector<Sample> mussel{
      {0.0571, 0.0813, 0.0831, 0.0976, 0.0817, 0.0859, 0.0735, 0.0659, 0.0923, 0.0836},
      {0.0873, 0.0662, 0.0672, 0.0819, 0.0749, 0.0649, 0.0835, 0.0725},
      {0.0974, 0.1352, 0.0817, 0.1016, 0.0968, 0.1064, 0.105},
      {0.1033, 0.0915, 0.0781, 0.0685, 0.0677, 0.0697, 0.0764, 0.0689},
      {0.0703, 0.1026, 0.0956, 0.0973, 0.1039, 0.1045}};
  const auto an = stats::anova_oneway(mussel);
  o.require(near(an.F, 7.1210, 1e-4) && near(an.p, 2.8122e-4, 1e-7), "anova F=" + fmt(an.F));

  const auto tk = stats::tukey_hsd({{24.5, 23.5, 26.4, 27.1, 29.9},
                                    {28.4, 34.2, 29.5, 32.2, 30.1},
                                    {26.1, 28.3, 24.3, 26.2, 27.8}});
  const bool tukey_ok = tk.size() == 3 && near(tk[0].p_adj, 0.01444833, kFixtureTol) &&
                        near(tk[1].p_adj, 0.98031072, kFixtureTol) && near(tk[2].p_adj, 0.02033114, kFixtureTol);
  o.require(tukey_ok, "tukey p_adj");

  const auto chi = stats::chi_square_independence({{20, 5}, {5, 20}});
  o.require(near(chi.chi2, 18.0, 1e-12) && near(chi.p, 2.2090496998585475e-05, 1e-12), "chi2=" + fmt(chi.chi2));

  const auto sw = stats::shapiro_wilk(Sample{148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236});
  o.require(near(sw.W, 0.7888146948631716, 1e-6) && near(sw.p, 0.006703814061898823, 1e-6),
            "shapiro W=" + fmt(sw.W));

  const auto lv = stats::levene({{8.88, 9.12, 9.04, 8.98, 9.00, 9.08, 9.01, 8.85, 9.06, 8.99},
                                 {8.88, 8.95, 9.29, 9.44, 9.15, 9.58, 8.36, 9.18, 8.67, 9.05},
                                 {8.95, 9.12, 8.95, 8.85, 9.03, 8.84, 9.07, 8.98, 8.86, 8.98}});
  o.require(near(lv.W, 7.584952754501659, 1e-8) && near(lv.p, 0.002431505967249681, 1e-9),
            "levene W=" + fmt(lv.W));

  // Exact MWU against full enumeration, every size pair up to 7 with and without ties.
  Rng rng(77);
  std::size_t mwu_cases = 0, mwu_bad = 0;
  for (std::size_t n1 = 1; n1 <= 7; ++n1) {
    for (std::size_t n2 = 1; n2 <= 7; ++n2) {
      for (int rep = 0; rep < 8; ++rep) {
        const bool ties = rep % 2 == 0;
        Sample a(n1), b(n2);
        for (auto& x : a) x = ties ? std::round(rng.uniform(0, 4)) : rng.uniform(0, 10);
        for (auto& x : b) x = ties ? std::round(rng.uniform(0, 4)) : rng.uniform(0, 10);
        const auto r = stats::mann_whitney_u(a, b, stats::MwuMethod::exact);
        mwu_bad += !near(r.p, brute_force_mwu_p(a, b), kMwuTol);
        ++mwu_cases;
      }
    }
  }
  o.require(mwu_bad == 0, "mwu exact=brute " + std::to_string(mwu_cases - mwu_bad) + "/" + std::to_string(mwu_cases));

  const Sample s{1.3, 2.7, 0.4, 5.5};
  const auto an0 = stats::anova_oneway({s, s, s});
  bool nulls = an0.F == 0.0 && an0.p == 1.0;
  for (const auto& p : stats::tukey_hsd({s, s, s})) nulls = nulls && p.q == 0.0 && p.p_adj == 1.0;
  const auto chi0 = stats::chi_square_independence({{10, 10}, {10, 10}});
  nulls = nulls && chi0.chi2 == 0.0 && chi0.p == 1.0;
  const auto u0 = stats::mann_whitney_u(s, s);
  nulls = nulls && u0.p == 1.0 && stats::rank_biserial(u0.U, s.size(), s.size()) == 0.0;
  nulls = nulls && stats::levene({s, s, s}).W == 0.0 && stats::cohens_d(s, s) == 0.0;
  o.require(nulls, "identical-group nulls");
  return o;
}

// ---- criterion 8: property checks ----

bool kalman_psd(std::string& why) {
  using namespace perception;
  Rng rng(123456);
  Track t;
  t.id = "a";
  t.covariance = Matrix6::Identity() * 4.0;
  for (int cycle = 0; cycle < 10000; ++cycle) {
    if (cycle % 500 == 0) {
      Matrix6 A;
      for (int i = 0; i < 36; ++i) A(i / 6, i % 6) = rng.normal();
      t.covariance = A * A.transpose() + Matrix6::Identity() * 1e-3;
    }
    const double dt = rng.uniform(0.0, 1.0);
    t = kf_predict(t, dt, white_acceleration_noise(rng.uniform(0.0, 2.0), dt));
    if (!is_symmetric_psd(t.covariance) ||
        Eigen::LLT<Matrix6>(t.covariance + Matrix6::Identity() * 1e-12).info() != Eigen::Success) {
      why = "predict cycle " + std::to_string(cycle);
      return false;
    }
    Eigen::Matrix3d B;
    for (int i = 0; i < 9; ++i) B(i / 3, i % 3) = rng.normal() * rng.uniform(0.01, 2.0);
    Detection d;
    d.position = {rng.normal(0, 5), rng.normal(0, 5), rng.normal(0, 5)};
    d.confidence = 0.8;
    const auto r = kf_update(t, d, B * B.transpose() + Matrix3::Identity() * 1e-6);
    t = r.track;
    if (!r.applied || !is_symmetric_psd(t.covariance)) {
      why = "update cycle " + std::to_string(cycle);
      return false;
    }
  }
  return true;
}

std::string random_text(Rng& rng) {
  static const std::string alphabet = "abcXYZ019 _-\"\\/\n";
  std::string s;
  const auto n = rng.below(12);
  for (std::uint64_t i = 0; i < n; ++i) s += alphabet[rng.below(alphabet.size())];
  if (rng.uniform() < 0.2) s += "\xC3\xA9";
  return s;
}

integration::Message random_message(Rng& rng) {
  using namespace integration;
  if (rng.uniform() < 0.5) {
    AcpMessage m;
    m.msg_id = "m" + random_text(rng);
    m.from = random_text(rng);
    m.to = random_text(rng);
    m.kind = static_cast<AcpMessage::Kind>(rng.below(3));
    if (m.kind == AcpMessage::Kind::alert) {
      m.payload = {{"gps", {{"lat", rng.uniform(-90, 90)}, {"lon", rng.uniform(-180, 180)}, {"alt", 3.0}}},
                   {"image_ref", "f" + random_text(rng)}};
    }
    m.payload["note"] = random_text(rng);
    m.payload["n"] = static_cast<std::int64_t>(rng.below(1000000)) - 500000;
    return m;
  }
  A2aMessage m;
  m.msg_id = "m" + random_text(rng);
  m.conversation_id = random_text(rng);
  m.performative = static_cast<A2aMessage::Performative>(rng.below(5));
  m.task = {{"type", random_text(rng)}, {"location", {rng.uniform(-50, 50), rng.uniform(-50, 50), 0.0}}};
  if (m.performative == A2aMessage::Performative::propose || rng.uniform() < 0.3) m.bid_cost = rng.uniform(0, 100);
  m.sender = random_text(rng);
  return m;
}

std::size_t codec_failures() {
  Rng rng(2718);
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto m = random_message(rng);
    const auto bytes = integration::encode_message(m);
    const auto back = integration::decode_message(bytes);
    bad += !(back == m) || integration::encode_message(back) != bytes;
  }
  return bad;
}

bool has_kind(const std::vector<reasoning::Violation>& v, const std::string& kind) {
  return std::any_of(v.begin(), v.end(), [&](const reasoning::Violation& x) { return x.kind == kind; });
}

std::size_t validator_misses(std::size_t& checked) {
  using namespace reasoning;
  const std::set<std::string> tools{"api.weather.get_forecast", "alert.dispatch", "db.log_incident"};
  Rng rng(31);
  std::size_t missed = 0;
  checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    PolicyGraph g;
    g.plan_id = "P-R";
    g.goal = "fuzz";
    const int n = 1 + static_cast<int>(rng.below(6));
    for (int id = 1; id <= n; ++id) {
      PlanStep s;
      s.step_id = id;
      s.action = rng.uniform() < 0.5 ? ActionKind::call_tool : ActionKind::loiter;
      if (s.action == ActionKind::call_tool) s.tool_name = "api.weather.get_forecast";
      s.on_fail = static_cast<OnFail>(rng.below(3));
      for (int d = 1; d < id; ++d)
        if (rng.uniform() < 0.4) g.dependencies[id].push_back(d);
      if (!g.dependencies[id].empty() && rng.uniform() < 0.5)
        s.preconditions.push_back("step_" + std::to_string(g.dependencies[id].front()) + ".wind_speed < 15");
      if (g.dependencies[id].empty()) g.dependencies.erase(id);
      g.steps.push_back(s);
    }
    if (!validate_policy_graph(g, &tools).empty()) {
      ++missed;  // a valid plan must pass
      continue;
    }
    std::string expected;
    switch (rng.below(6)) {
      case 0:
        if (n < 2) continue;
        g.dependencies[1].push_back(n);
        g.dependencies[n].push_back(1);
        expected = "cycle";
        break;
      case 1:
        g.dependencies[1].push_back(n + 5);
        expected = "unknown step";
        break;
      case 2:
        g.steps.push_back(g.steps.front());
        expected = "duplicate step";
        break;
      case 3:
        g.steps[rng.below(n)].on_fail.reset();
        expected = "missing on_fail";
        break;
      case 4:
        g.steps[rng.below(n)].preconditions.push_back("step_1.wind_speed <");
        expected = "precondition parse";
        break;
      default:
        if (n < 2) continue;
        g.steps[0].preconditions.push_back("step_" + std::to_string(n) + ".wind_speed < 15");
        expected = "non-dependency reference";
    }
    ++checked;
    missed += !has_kind(validate_policy_graph(g, &tools), expected);
  }
  return missed;
}

std::size_t auction_mismatches() {
  using namespace integration;
  Rng rng(8);
  std::size_t bad = 0;
  for (int trial = 0; trial < 300; ++trial) {
    NetworkSimulator net({rng.uniform(0.0, 0.3), 0.0, 0.0}, Rng(trial));
    std::vector<Bidder> peers;
    const auto n = 1 + rng.below(6);
    for (std::uint64_t i = 0; i < n; ++i) {
      Bidder b;
      b.agent_id = "uav-" + std::to_string(i);
      b.position = {double(rng.below(5)) * 10, 0, 0};
      b.battery_fraction = double(rng.below(3)) / 2.0;
      peers.push_back(b);
    }
    std::shuffle(peers.begin(), peers.end(), std::mt19937_64(trial));
    A2aMessage cfp;
    cfp.msg_id = "cfp-1";
    cfp.conversation_id = "conv-1";
    cfp.performative = A2aMessage::Performative::cfp;
    cfp.task = {{"type", "rescue"}, {"location", {0.0, 0.0, 0.0}}};
    cfp.sender = "manager";
    const auto r = run_task_auction(cfp, peers, net, {}, 0.0);
    std::string best;
    double best_cost = 0;
    for (const auto& p : peers) {
      // Travel time at cruise speed plus the battery penalty, computed here from scratch.
      const double c = p.position.norm() / p.cruise_speed + (1.0 - p.battery_fraction) * 10.0;
      if (best.empty() || c < best_cost || (c == best_cost && p.agent_id < best)) {
        best = p.agent_id;
        best_cost = c;
      }
    }
    bad += !r.awarded || r.winner != best;
  }
  return bad;
}

bool runs_deterministic() {
  const auto a = scratch("c8_det");
  const auto keep = scratch("c8_det_first");
  mission::run_mission(run_config("scenario2_emergency.json", a));
  fs::create_directories(keep);
  const std::vector<std::string> files{"mission_log.jsonl", "run_log.jsonl", "sim_events.jsonl",
                                       "incidents.jsonl", "manifest.json"};
  for (const auto& f : files) fs::copy_file(a / f, keep / f);
  fs::remove_all(a);
  mission::run_mission(run_config("scenario2_emergency.json", a));
  return std::all_of(files.begin(), files.end(), [&](const std::string& f) { return slurp(a / f) == slurp(keep / f); });
}

Outcome c8_properties() {
  Outcome o;
  std::string why;
  o.require(kalman_psd(why), "kf psd 10000 cycles" + (why.empty() ? "" : " failed at " + why));
  const auto codec = codec_failures();
  o.require(codec == 0, "codec round-trip 10000 (" + std::to_string(codec) + " bad)");
  std::size_t checked = 0;
  const auto missed = validator_misses(checked);
  o.require(missed == 0, "validator mutations " + std::to_string(checked - std::min(checked, missed)) + "/" +
                             std::to_string(checked));
  const auto auction = auction_mismatches();
  o.require(auction == 0, "auction brute force 300 (" + std::to_string(auction) + " bad)");
  o.require(runs_deterministic(), "same-seed runs byte-identical");
  return o;
}

Outcome c9_declared(const mission::ComparisonResult& cmp) {
  Outcome o;
  const bool declared = std::any_of(cmp.report.notes.begin(), cmp.report.notes.end(), [](const std::string& n) {
    return n.find("Not reproduced here") != std::string::npos;
  });
  o.require(declared, "report declares model latencies, confidence ANOVA and intervention reduction as not reproduced");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };

  std::optional<mission::ComparisonResult> cmp;
  auto comparison = [&]() -> const mission::ComparisonResult& {
    if (!cmp) {
      mission::ComparisonConfig c;
      c.out_dir = scratch("comparison");
      cmp = mission::run_comparison(c);
    }
    return *cmp;
  };

  const std::vector<Criterion> criteria{
      {1, "processing-time ANOVA from summary statistics", c1_anova},
      {2, "Cramer's V of the detection contingency", c2_cramers_v},
      {3, "post-hoc power", c3_power},
      {4, "ARR/CAR (agentic values are emulation targets)", [&] { return c4_rates(comparison()); }},
      {5, "emergency scenario end to end", c5_emergency},
      {6, "normal scenario raises nothing", c6_normal},
      {7, "statistics fixtures and oracles", c7_oracles},
      {8, "property checks", c8_properties},
      {9, "declared not reproducible", [&] { return c9_declared(comparison()); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("!exception: ") + e.what());
    }
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("criterion %d %s: %s [%s]\n", c.id, o.pass ? "PASS" : "FAIL", c.title, detail.c_str());
    failed += !o.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
