#include "auav/stats/tests.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "auav/common/error.hpp"
#include "auav/stats/distributions.hpp"

namespace auav::stats {

namespace {

[[noreturn]] void degenerate(const std::string& what) { throw Error(ErrorCode::degenerate, what); }

void check_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, std::string(what) + ": non-finite value");
  }
}

void check_groups(const std::vector<Sample>& groups, const char* what) {
  if (groups.size() < 2) degenerate(std::string(what) + ": need at least 2 groups");
  for (const auto& g : groups) {
    if (g.size() < 2) degenerate(std::string(what) + ": every group needs at least 2 values");
    check_finite(g, what);
  }
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) degenerate("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) degenerate("variance needs at least 2 values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double median(std::span<const double> x) {
  if (x.empty()) degenerate("median of empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

namespace {

AnovaResult finish_anova(double ss_between, double ss_within, double k, double n_total) {
  AnovaResult r;
  r.df1 = k - 1.0;
  r.df2 = n_total - k;
  r.ms_between = ss_between / r.df1;
  r.ms_within = ss_within / r.df2;
  // Relative tolerance: identical groups leave rounding-level between-group spread.
  const double scale = std::max(ss_between + ss_within, 1e-300);
  if (ss_between <= 1e-13 * scale) {
    r.F = 0.0;
    r.p = 1.0;
    return r;
  }
  if (r.ms_within <= 0.0) degenerate("ANOVA: zero within-group variance with differing means");
  r.F = r.ms_between / r.ms_within;
  r.p = f_sf(r.F, r.df1, r.df2);
  return r;
}

}  // namespace

AnovaResult anova_oneway(const std::vector<Sample>& groups) {
  check_groups(groups, "ANOVA");
  double n_total = 0.0;
  double sum = 0.0;
  for (const auto& g : groups) {
    n_total += static_cast<double>(g.size());
    sum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const double grand = sum / n_total;
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  return finish_anova(ssb, ssw, static_cast<double>(groups.size()), n_total);
}

AnovaResult anova_from_summary(std::span<const double> means, std::span<const double> sds,
                               std::span<const double> ns) {
  if (means.size() != sds.size() || means.size() != ns.size()) {
    throw Error(ErrorCode::invalid_argument, "anova_from_summary: mismatched input lengths");
  }
  if (means.size() < 2) degenerate("anova_from_summary: need at least 2 groups");
  double n_total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (!(ns[i] >= 2.0)) degenerate("anova_from_summary: every n must be >= 2");
    if (!(sds[i] >= 0.0) || !std::isfinite(means[i])) {
      throw Error(ErrorCode::invalid_argument, "anova_from_summary: invalid summary");
    }
    n_total += ns[i];
    weighted += ns[i] * means[i];
  }
  const double grand = weighted / n_total;
  double ssb = 0.0;
  double ssw = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    ssb += ns[i] * (means[i] - grand) * (means[i] - grand);
    ssw += (ns[i] - 1.0) * sds[i] * sds[i];
  }
  return finish_anova(ssb, ssw, static_cast<double>(means.size()), n_total);
}

std::vector<TukeyPair> tukey_hsd(const std::vector<Sample>& groups, double alpha) {
  const AnovaResult a = anova_oneway(groups);
  const int k = static_cast<int>(groups.size());
  std::vector<TukeyPair> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      TukeyPair t;
      t.i = i;
      t.j = j;
      t.mean_diff = mean(groups[i]) - mean(groups[j]);
      const double se = std::sqrt(a.ms_within / 2.0 *
                                  (1.0 / static_cast<double>(groups[i].size()) +
                                   1.0 / static_cast<double>(groups[j].size())));
      if (std::fabs(t.mean_diff) <= 0.0) {
        t.q = 0.0;
        t.p_adj = 1.0;
      } else if (se <= 0.0) {
        degenerate("Tukey HSD: zero standard error with differing means");
      } else {
        t.q = std::fabs(t.mean_diff) / se;
        t.p_adj = std::clamp(studentized_range_sf(t.q, k, a.df2), 0.0, 1.0);
      }
      t.significant = t.p_adj < alpha;
      out.push_back(t);
    }
  }
  return out;
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table) {
  const std::size_t r = table.size();
  if (r < 2) degenerate("chi-square: need at least 2 rows");
  const std::size_t c = table[0].size();
  if (c < 2) degenerate("chi-square: need at least 2 columns");
  std::vector<double> row(r, 0.0);
  std::vector<double> col(c, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    if (table[i].size() != c) throw Error(ErrorCode::invalid_argument, "chi-square: ragged table");
    for (std::size_t j = 0; j < c; ++j) {
      const double v = table[i][j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::invalid_argument, "chi-square: counts must be non-negative");
      }
      row[i] += v;
      col[j] += v;
      n += v;
    }
  }
  ChiSquareResult out;
  out.n = n;
  out.df = static_cast<double>((r - 1) * (c - 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double e = row[i] * col[j] / n;
      if (!(e > 0.0)) degenerate("chi-square: zero expected count");
      out.chi2 += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  }
  out.p = chi2_sf(out.chi2, out.df);
  return out;
}

double cramers_v(double chi2, double n, std::size_t rows, std::size_t cols) {
  if (!(n > 0.0) || rows < 2 || cols < 2 || chi2 < 0.0) {
    throw Error(ErrorCode::invalid_argument, "cramers_v: invalid arguments");
  }
  const double m = static_cast<double>(std::min(rows, cols) - 1);
  return std::sqrt(chi2 / (n * m));
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) degenerate("Cohen's d: both samples need at least 2 values");
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double diff = mean(a) - mean(b);
  const double pooled = std::sqrt(((n1 - 1.0) * variance(a) + (n2 - 1.0) * variance(b)) / (n1 + n2 - 2.0));
  if (pooled <= 0.0) {
    if (diff == 0.0) return 0.0;
    degenerate("Cohen's d: zero pooled SD with differing means");
  }
  return diff / pooled;
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
    i = j + 1;
  }
  return ranks;
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MwuMethod method) {
  if (a.empty() || b.empty()) degenerate("Mann-Whitney: both samples must be non-empty");
  check_finite(a, "Mann-Whitney");
  check_finite(b, "Mann-Whitney");
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  const auto ranks = midranks(all);
  double r1 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
  MannWhitneyResult out;
  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  out.U = r1 - dn1 * (dn1 + 1.0) / 2.0;
  const double mu = dn1 * dn2 / 2.0;
  const double dev = std::fabs(out.U - mu);

  const bool exact = method == MwuMethod::exact || (method == MwuMethod::automatic && n <= 20);
  if (exact) {
    if (n > 60) throw Error(ErrorCode::invalid_argument, "Mann-Whitney exact: sample too large");
    // Permutation distribution of the rank sum of sample a, over doubled midranks so
    // every value is an integer.
    std::vector<int> doubled(n);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
      total += doubled[i];
    }
    std::vector<std::vector<double>> dp(n1 + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    dp[0][0] = 1.0;
    for (std::size_t item = 0; item < n; ++item) {
      const int w = doubled[item];
      for (std::size_t j = std::min(n1, item + 1); j >= 1; --j) {
        auto& to = dp[j];
        const auto& from = dp[j - 1];
        for (int s = total; s >= w; --s) to[static_cast<std::size_t>(s)] += from[static_cast<std::size_t>(s - w)];
      }
    }
    double count = 0.0;
    double extreme = 0.0;
    const double base = dn1 * (dn1 + 1.0) / 2.0;
    for (int s = 0; s <= total; ++s) {
      const double c = dp[n1][static_cast<std::size_t>(s)];
      if (c == 0.0) continue;
      count += c;
      const double u = 0.5 * s - base;
      if (std::fabs(u - mu) >= dev - 1e-9) extreme += c;
    }
    out.p = std::clamp(extreme / count, 0.0, 1.0);
    out.exact = true;
    return out;
  }

  // Tie correction on the variance.
  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }
  const double dn = static_cast<double>(n);
  const double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_sum / (dn * (dn - 1.0)));
  if (var <= 0.0) {
    out.p = 1.0;
    return out;
  }
  const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
  out.p = std::clamp(2.0 * normal_sf(z), 0.0, 1.0);
  return out;
}

double rank_biserial(double U, double n1, double n2) {
  if (!(n1 > 0.0 && n2 > 0.0)) throw Error(ErrorCode::invalid_argument, "rank_biserial: sizes must be positive");
  return 1.0 - 2.0 * U / (n1 * n2);
}

namespace {

double poly(std::span<const double> c, double x) {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

}  // namespace

ShapiroWilkResult shapiro_wilk(std::span<const double> xin) {
  const std::size_t n = xin.size();
  if (n < 3 || n > 5000) throw Error(ErrorCode::invalid_argument, "Shapiro-Wilk: n must be in [3, 5000]");
  check_finite(xin, "Shapiro-Wilk");
  std::vector<double> x(xin.begin(), xin.end());
  std::sort(x.begin(), x.end());
  if (x.back() - x.front() <= 1e-300 || x.back() - x.front() <= 1e-12 * std::fabs(x.back())) {
    degenerate("Shapiro-Wilk: all values are identical");
  }
  static constexpr std::array<double, 6> c1{0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr std::array<double, 6> c2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr std::array<double, 4> c3{0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr std::array<double, 4> c4{1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr std::array<double, 4> c5{-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr std::array<double, 3> c6{-0.4803, -0.082676, 0.0030302};
  static constexpr std::array<double, 2> g{-2.273, 0.459};

  const std::size_t half = n / 2;
  const double an = static_cast<double>(n);
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first;
    double fac;
    if (n > 5) {
      first = 2;
      const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      first = 1;
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
  }

  const double xm = mean(x);
  double ssq = 0.0;
  for (double v : x) ssq += (v - xm) * (v - xm);
  double num = 0.0;
  for (std::size_t i = 0; i < half; ++i) num += a[i] * (x[n - 1 - i] - x[i]);
  ShapiroWilkResult out;
  out.W = std::min(1.0, num * num / ssq);

  if (n == 3) {
    const double pw = 6.0 / std::numbers::pi * (std::asin(std::sqrt(out.W)) - std::numbers::pi / 3.0);
    out.p = std::clamp(pw, 0.0, 1.0);
    return out;
  }
  double w1 = std::log(1.0 - out.W);
  double m;
  double s;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (w1 >= gamma) {
      out.p = 1e-99;
      return out;
    }
    w1 = -std::log(gamma - w1);
    m = poly(c3, an);
    s = std::exp(poly(c4, an));
  } else {
    const double xx = std::log(an);
    m = poly(c5, xx);
    s = std::exp(poly(c6, xx));
  }
  out.p = std::clamp(normal_sf((w1 - m) / s), 0.0, 1.0);
  return out;
}

LeveneResult levene(const std::vector<Sample>& groups) {
  check_groups(groups, "Levene");
  std::vector<Sample> dev;
  dev.reserve(groups.size());
  for (const auto& g : groups) {
    const double med = median(g);
    Sample d;
    d.reserve(g.size());
    for (double v : g) d.push_back(std::fabs(v - med));
    dev.push_back(std::move(d));
  }
  LeveneResult out;
  AnovaResult a;
  try {
    a = anova_oneway(dev);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate) throw;
    degenerate("Levene: absolute deviations have no within-group spread");
  }
  out.W = a.F;
  out.df1 = a.df1;
  out.df2 = a.df2;
  out.p = a.p;
  return out;
}

double posthoc_power_anova(std::span<const double> means, std::span<const double> sds,
                           std::span<const double> ns, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "power: alpha must be in (0,1)");
  const AnovaResult a = anova_from_summary(means, sds, ns);
  double n_total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    n_total += ns[i];
    weighted += ns[i] * means[i];
  }
  const double grand = weighted / n_total;
  double between = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) between += ns[i] * (means[i] - grand) * (means[i] - grand);
  if (between <= 0.0) return alpha;
  if (a.ms_within <= 0.0) throw Error(ErrorCode::invalid_argument, "power: zero within-group variance");
  const double lambda = between / a.ms_within;
  const double f_crit = f_quantile(1.0 - alpha, a.df1, a.df2);
  return std::clamp(1.0 - noncentral_f_cdf(f_crit, a.df1, a.df2, lambda), 0.0, 1.0);
}

}  // namespace auav::stats
