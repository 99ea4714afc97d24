#pragma once

#include <span>
#include <string>
#include <vector>

namespace auav::stats {

using Sample = std::vector<double>;

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased (n - 1)
double stddev(std::span<const double> x);
double median(std::span<const double> x);

struct AnovaResult {
  double F = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p = 1.0;
  double ms_between = 0.0;
  double ms_within = 0.0;
};

// Requires >= 2 groups of >= 2 values; throws Error(degenerate) otherwise, and when all
// within-group variance is zero but the means differ.
AnovaResult anova_oneway(const std::vector<Sample>& groups);
// Same decomposition from per-group means, SDs and sizes.
AnovaResult anova_from_summary(std::span<const double> means, std::span<const double> sds,
                               std::span<const double> ns);

struct TukeyPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double mean_diff = 0.0;  // mean_i - mean_j
  double q = 0.0;
  double p_adj = 1.0;
  bool significant = false;
};

// Tukey-Kramer for unequal sizes: q = |mi - mj| / sqrt(MSW/2 * (1/ni + 1/nj)).
std::vector<TukeyPair> tukey_hsd(const std::vector<Sample>& groups, double alpha = 0.05);

struct ChiSquareResult {
  double chi2 = 0.0;
  double df = 0.0;
  double p = 1.0;
  double n = 0.0;
};

// Pearson test of independence. Throws Error(degenerate) if an expected count is zero.
ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table);
double cramers_v(double chi2, double n, std::size_t rows, std::size_t cols);

// Mean difference over the pooled SD. Throws Error(degenerate) when the pooled SD is
// zero and the means differ.
double cohens_d(std::span<const double> a, std::span<const double> b);

enum class MwuMethod { automatic, exact, asymptotic };

struct MannWhitneyResult {
  double U = 0.0;  // for sample a
  double p = 1.0;  // two-sided
  bool exact = false;
};

// Midranks for ties. automatic: exact permutation distribution when n1 + n2 <= 20,
// otherwise normal approximation with tie and continuity corrections.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 MwuMethod method = MwuMethod::automatic);
double rank_biserial(double U, double n1, double n2);

// Midranks (1-based) of the concatenated values.
std::vector<double> midranks(std::span<const double> values);

struct ShapiroWilkResult {
  double W = 1.0;
  double p = 1.0;
};

// Royston's polynomial approximation, 3 <= n <= 5000.
ShapiroWilkResult shapiro_wilk(std::span<const double> x);

struct LeveneResult {
  double W = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p = 1.0;
};

// Brown-Forsythe variant: ANOVA on absolute deviations from group medians.
LeveneResult levene(const std::vector<Sample>& groups);

// Post-hoc power of the one-way ANOVA F test: noncentral F with
// lambda = sum n_i (m_i - grand)^2 / MSW = f^2 N.
double posthoc_power_anova(std::span<const double> means, std::span<const double> sds,
                           std::span<const double> ns, double alpha = 0.05);

}  // namespace auav::stats
