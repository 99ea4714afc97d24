#include "auav/stats/report.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "auav/common/error.hpp"

namespace auav::stats {

namespace {

using nlohmann::json;

const std::vector<std::string> kSystemOrder{"rule_based", "agentic_local", "agentic_cloud"};

double rounded(double v) { return std::stod(format_number(v)); }

template <typename F>
void attempt(std::vector<std::string>& warnings, const std::string& what, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    warnings.push_back(what + " skipped: " + e.what());
  }
}

std::optional<RateTest> rate_test(const std::vector<SystemSummary>& systems, std::size_t SystemSummary::*count,
                                  std::vector<std::string>& warnings, const std::string& what) {
  std::vector<std::vector<double>> table;
  for (const auto& s : systems) {
    const auto yes = static_cast<double>(s.*count);
    table.push_back({yes, static_cast<double>(s.n) - yes});
  }
  std::optional<RateTest> out;
  attempt(warnings, what, [&] {
    RateTest t;
    t.chi2 = chi_square_independence(table);
    t.cramers_v = cramers_v(t.chi2.chi2, t.chi2.n, table.size(), 2);
    out = t;
  });
  return out;
}

json anova_json(const AnovaResult& a) {
  return json{{"F", rounded(a.F)}, {"df1", a.df1}, {"df2", a.df2}, {"p", rounded(a.p)}};
}

json rate_json(const RateTest& t) {
  return json{{"chi2", rounded(t.chi2.chi2)},
              {"df", t.chi2.df},
              {"p", rounded(t.chi2.p)},
              {"n", t.chi2.n},
              {"cramers_v", rounded(t.cramers_v)}};
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

std::string anova_line(const AnovaResult& a) {
  return "F(" + format_number(a.df1) + ", " + format_number(a.df2) + ") = " + format_number(a.F) +
         ", p = " + format_number(a.p);
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

StatsReport generate_report(std::span<const RunLogRecord> records, double alpha) {
  if (records.empty()) throw Error(ErrorCode::invalid_argument, "report needs at least one record");
  std::map<std::string, std::vector<const RunLogRecord*>> by_system;
  for (const auto& r : records) {
    r.validate();
    by_system[r.system].push_back(&r);
  }

  StatsReport rep;
  std::vector<Sample> times;
  std::vector<Sample> confidences;
  std::vector<std::string> conf_names;
  for (const auto& name : kSystemOrder) {
    const auto it = by_system.find(name);
    if (it == by_system.end() || it->second.empty()) {
      rep.warnings.push_back("no records for " + name);
      continue;
    }
    const auto& recs = it->second;
    SystemSummary s;
    s.system = name;
    s.n = recs.size();
    Sample t;
    Sample c;
    std::vector<RunLogRecord> copy;
    for (const auto* r : recs) {
      t.push_back(r->processing_time);
      if (r->detection_confidence) c.push_back(*r->detection_confidence);
      s.persons_detected += std::min(r->persons_detected, r->persons_present);
      s.persons_present += r->persons_present;
      if (has_action(*r)) ++s.with_actions;
      if (has_context(*r)) ++s.with_context;
      s.latency_emulated = s.latency_emulated || r->latency_emulated;
      if (s.backend.empty() || s.backend == r->backend) {
        s.backend = r->backend;
      } else {
        s.backend = "mixed";
      }
      copy.push_back(*r);
    }
    s.time_mean = mean(t);
    s.time_sd = t.size() >= 2 ? stddev(t) : 0.0;
    if (!c.empty()) {
      s.confidence_mean = mean(c);
      s.confidence_n = c.size();
      if (c.size() >= 2) {
        confidences.push_back(c);
        conf_names.push_back(name);
      }
    }
    s.arr = arr(copy);
    s.car = car(copy);
    if (s.n < 2) rep.warnings.push_back(name + " has fewer than 2 records; excluded from tests");
    rep.systems.push_back(s);
    times.push_back(std::move(t));
  }

  // Only systems with two or more records enter the tests.
  std::vector<Sample> groups;
  std::vector<std::string> names;
  std::vector<SystemSummary> tested;
  for (std::size_t i = 0; i < rep.systems.size(); ++i) {
    if (times[i].size() < 2) continue;
    groups.push_back(times[i]);
    names.push_back(rep.systems[i].system);
    tested.push_back(rep.systems[i]);
  }

  if (groups.size() < 2) {
    rep.warnings.push_back("fewer than 2 systems with data; comparative tests omitted");
  } else {
    attempt(rep.warnings, "processing-time ANOVA", [&] { rep.time_anova = anova_oneway(groups); });
    attempt(rep.warnings, "Tukey HSD", [&] {
      for (const auto& p : tukey_hsd(groups, alpha)) rep.time_tukey.push_back({names[p.i], names[p.j], p});
    });
    attempt(rep.warnings, "Levene", [&] { rep.time_levene = levene(groups); });
    attempt(rep.warnings, "power analysis", [&] {
      std::vector<double> m, sd, n;
      for (const auto& s : tested) {
        m.push_back(s.time_mean);
        sd.push_back(s.time_sd);
        n.push_back(static_cast<double>(s.n));
      }
      rep.time_power = posthoc_power_anova(m, sd, n, alpha);
    });
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        attempt(rep.warnings, "effect sizes " + names[i] + " vs " + names[j], [&] {
          PairwiseEffect e;
          e.a = names[i];
          e.b = names[j];
          e.mwu = mann_whitney_u(groups[i], groups[j]);
          e.rank_biserial =
              rank_biserial(e.mwu.U, static_cast<double>(groups[i].size()), static_cast<double>(groups[j].size()));
          e.cohens_d = cohens_d(groups[i], groups[j]);
          rep.time_effects.push_back(e);
        });
      }
    }
    rep.arr_test = rate_test(tested, &SystemSummary::with_actions, rep.warnings, "ARR chi-square");
    rep.car_test = rate_test(tested, &SystemSummary::with_context, rep.warnings, "CAR chi-square");
    if (confidences.size() >= 2) {
      attempt(rep.warnings, "detection-confidence ANOVA", [&] { rep.confidence_anova = anova_oneway(confidences); });
    }
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    attempt(rep.warnings, "Shapiro-Wilk for " + names[i], [&] {
      if (groups[i].size() < 3) throw Error(ErrorCode::degenerate, "fewer than 3 values");
      rep.normality.push_back({names[i], shapiro_wilk(groups[i])});
    });
  }

  bool any_emulated = false;
  for (const auto& s : rep.systems) any_emulated = any_emulated || s.latency_emulated;
  if (any_emulated) {
    rep.notes.push_back(
        "Processing times and confidences marked emulated come from calibrated tier profiles, "
        "not from measured model calls.");
    rep.notes.push_back(
        "ARR and CAR of scripted agentic systems reproduce calibrated emulation targets; they are "
        "not independent measurements of model behaviour.");
  }
  rep.notes.push_back(
      "Not reproduced here: absolute cloud and local model latencies and self-reported confidences, "
      "the detection-confidence ANOVA of the original evaluation (group SDs unavailable), and the "
      "operator-intervention reduction figure.");
  return rep;
}

nlohmann::json to_json(const StatsReport& r) {
  json j;
  json systems = json::array();
  for (const auto& s : r.systems) {
    json o{{"system", s.system},
           {"n", s.n},
           {"processing_time_mean_s", rounded(s.time_mean)},
           {"processing_time_sd_s", rounded(s.time_sd)},
           {"persons_detected", s.persons_detected},
           {"persons_present", s.persons_present},
           {"arr_percent", rounded(s.arr)},
           {"car_percent", rounded(s.car)},
           {"backend", s.backend},
           {"latency_emulated", s.latency_emulated}};
    o["detection_confidence_mean"] = s.confidence_mean ? json(rounded(*s.confidence_mean)) : json(nullptr);
    systems.push_back(o);
  }
  j["systems"] = systems;
  j["processing_time_anova"] = r.time_anova ? anova_json(*r.time_anova) : json(nullptr);
  j["detection_confidence_anova"] = r.confidence_anova ? anova_json(*r.confidence_anova) : json(nullptr);
  json tukey = json::array();
  for (const auto& t : r.time_tukey) {
    tukey.push_back(json{{"a", t.a},
                         {"b", t.b},
                         {"mean_diff", rounded(t.pair.mean_diff)},
                         {"q", rounded(t.pair.q)},
                         {"p_adj", rounded(t.pair.p_adj)},
                         {"significant", t.pair.significant}});
  }
  j["processing_time_tukey"] = tukey;
  j["arr_chi_square"] = r.arr_test ? rate_json(*r.arr_test) : json(nullptr);
  j["car_chi_square"] = r.car_test ? rate_json(*r.car_test) : json(nullptr);
  json effects = json::array();
  for (const auto& e : r.time_effects) {
    effects.push_back(json{{"a", e.a},
                           {"b", e.b},
                           {"cohens_d", rounded(e.cohens_d)},
                           {"mann_whitney_U", rounded(e.mwu.U)},
                           {"mann_whitney_p", rounded(e.mwu.p)},
                           {"mann_whitney_exact", e.mwu.exact},
                           {"rank_biserial", rounded(e.rank_biserial)}});
  }
  j["processing_time_effects"] = effects;
  json normality = json::array();
  for (const auto& n : r.normality) {
    normality.push_back(json{{"system", n.system}, {"W", rounded(n.sw.W)}, {"p", rounded(n.sw.p)}});
  }
  j["shapiro_wilk"] = normality;
  j["levene"] = r.time_levene ? json{{"W", rounded(r.time_levene->W)},
                                     {"df1", r.time_levene->df1},
                                     {"df2", r.time_levene->df2},
                                     {"p", rounded(r.time_levene->p)}}
                              : json(nullptr);
  j["power"] = r.time_power ? json(rounded(*r.time_power)) : json(nullptr);
  j["warnings"] = r.warnings;
  j["notes"] = r.notes;
  return j;
}

std::string render_text(const StatsReport& r) {
  std::ostringstream out;
  constexpr std::size_t kLabel = 30;
  constexpr std::size_t kCol = 22;
  auto row = [&](const std::string& label, const std::function<std::string(const SystemSummary&)>& cell) {
    out << pad(label, kLabel);
    for (const auto& s : r.systems) out << pad(cell(s), kCol);
    out << "\n";
  };
  row("Metric", [](const SystemSummary& s) { return s.system; });
  row("Sample size (n)", [](const SystemSummary& s) { return std::to_string(s.n); });
  row("Processing time mean (s)", [](const SystemSummary& s) { return format_number(s.time_mean); });
  row("Processing time SD (s)", [](const SystemSummary& s) { return format_number(s.time_sd); });
  row("Latency source", [](const SystemSummary& s) { return std::string(s.latency_emulated ? "emulated" : "measured"); });
  row("Detection confidence mean", [](const SystemSummary& s) {
    return s.confidence_mean ? format_number(*s.confidence_mean) : std::string("-");
  });
  row("Persons detected", [](const SystemSummary& s) {
    return std::to_string(s.persons_detected) + "/" + std::to_string(s.persons_present);
  });
  row("Action recommendation (%)", [](const SystemSummary& s) { return format_number(s.arr); });
  row("Contextual analysis (%)", [](const SystemSummary& s) { return format_number(s.car); });
  out << "\n";

  if (r.time_anova) out << "Processing time ANOVA: " << anova_line(*r.time_anova) << "\n";
  for (const auto& t : r.time_tukey) {
    out << "  Tukey " << t.a << " vs " << t.b << ": diff = " << format_number(t.pair.mean_diff)
        << ", q = " << format_number(t.pair.q) << ", p_adj = " << format_number(t.pair.p_adj)
        << (t.pair.significant ? " (significant)" : "") << "\n";
  }
  if (r.time_levene) {
    out << "Levene (median-centred): W = " << format_number(r.time_levene->W)
        << ", p = " << format_number(r.time_levene->p) << "\n";
  }
  for (const auto& n : r.normality) {
    out << "Shapiro-Wilk " << n.system << ": W = " << format_number(n.sw.W) << ", p = " << format_number(n.sw.p)
        << "\n";
  }
  for (const auto& e : r.time_effects) {
    out << "Effect " << e.a << " vs " << e.b << ": d = " << format_number(e.cohens_d)
        << ", U = " << format_number(e.mwu.U) << ", p = " << format_number(e.mwu.p)
        << (e.mwu.exact ? " (exact)" : " (normal approx.)") << ", r = " << format_number(e.rank_biserial) << "\n";
  }
  if (r.time_power) out << "Post-hoc power (processing time): " << format_number(*r.time_power) << "\n";
  if (r.confidence_anova) out << "Detection confidence ANOVA: " << anova_line(*r.confidence_anova) << "\n";
  auto rate_line = [&](const char* label, const std::optional<RateTest>& t) {
    if (!t) return;
    out << label << ": chi2(" << format_number(t->chi2.df) << ", N=" << format_number(t->chi2.n)
        << ") = " << format_number(t->chi2.chi2) << ", p = " << format_number(t->chi2.p)
        << ", V = " << format_number(t->cramers_v) << "\n";
  };
  rate_line("ARR chi-square", r.arr_test);
  rate_line("CAR chi-square", r.car_test);
  if (!r.warnings.empty()) {
    out << "\nWarnings:\n";
    for (const auto& w : r.warnings) out << "  - " << w << "\n";
  }
  if (!r.notes.empty()) {
    out << "\nNotes:\n";
    for (const auto& n : r.notes) out << "  - " << n << "\n";
  }
  return out.str();
}

std::string render_csv(const StatsReport& r) {
  std::ostringstream out;
  out << "system,n,processing_time_mean_s,processing_time_sd_s,detection_confidence_mean,"
         "persons_detected,persons_present,arr_percent,car_percent,latency_emulated\n";
  for (const auto& s : r.systems) {
    out << s.system << ',' << s.n << ',' << format_number(s.time_mean) << ',' << format_number(s.time_sd) << ','
        << (s.confidence_mean ? format_number(*s.confidence_mean) : "") << ',' << s.persons_detected << ','
        << s.persons_present << ',' << format_number(s.arr) << ',' << format_number(s.car) << ','
        << (s.latency_emulated ? "true" : "false") << "\n";
  }
  return out.str();
}

}  // namespace auav::stats
