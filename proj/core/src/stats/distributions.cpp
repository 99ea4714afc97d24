#include "auav/stats/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "auav/common/error.hpp"

namespace auav::stats {

namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::invalid_argument, what);
}

double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, "incomplete_beta: a and b must be positive");
  require(!std::isnan(x), "incomplete_beta: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double gamma_p(double a, double x) {
  require(a > 0.0, "gamma_p: a must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) {
    double sum = 1.0 / a;
    double del = sum;
    double ap = a;
    for (int n = 0; n < 100000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return std::min(1.0, sum * std::exp(-x + a * std::log(x) - std::lgamma(a)));
  }
  return 1.0 - gamma_q(a, x);
}

double gamma_q(double a, double x) {
  require(a > 0.0, "gamma_q: a must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p(a, x);
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::max(0.0, std::exp(-x + a * std::log(x) - std::lgamma(a)) * h);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "normal_quantile: p must be in (0,1)");
  // Acklam's rational approximation, then two Newton steps on the exact cdf.
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = normal_cdf(x) - p;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (pdf <= 0.0) break;
    x -= e / pdf;
  }
  return x;
}

double chi2_cdf(double x, double df) {
  require(df > 0.0, "chi2: df must be positive");
  return x <= 0.0 ? 0.0 : gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, double df) {
  require(df > 0.0, "chi2: df must be positive");
  return x <= 0.0 ? 1.0 : gamma_q(0.5 * df, 0.5 * x);
}

double f_cdf(double x, double df1, double df2) {
  require(df1 > 0.0 && df2 > 0.0, "F: degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return incomplete_beta(0.5 * df1, 0.5 * df2, df1 * x / (df1 * x + df2));
}

double f_sf(double x, double df1, double df2) {
  require(df1 > 0.0 && df2 > 0.0, "F: degrees of freedom must be positive");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  // Complementary form keeps precision in the far tail.
  return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * x));
}

double f_quantile(double p, double df1, double df2) {
  require(p >= 0.0 && p < 1.0, "f_quantile: p must be in [0,1)");
  if (p == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, df1, df2) < p) {
    hi *= 2.0;
    require(hi < 1e12, "f_quantile: no bracket");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f_cdf(mid, df1, df2) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double t_sf_two_sided(double t, double df) {
  require(df > 0.0, "t: df must be positive");
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double noncentral_f_cdf(double x, double df1, double df2, double lambda) {
  require(df1 > 0.0 && df2 > 0.0, "noncentral F: degrees of freedom must be positive");
  require(lambda >= 0.0, "noncentral F: lambda must be >= 0");
  if (x <= 0.0) return 0.0;
  if (lambda == 0.0) return f_cdf(x, df1, df2);
  const double y = df1 * x / (df1 * x + df2);
  const double mu = 0.5 * lambda;
  const auto mode = static_cast<long>(std::floor(mu));
  auto weight = [&](long j) {
    return std::exp(-mu + static_cast<double>(j) * std::log(mu) - std::lgamma(static_cast<double>(j) + 1.0));
  };
  auto term = [&](long j) { return incomplete_beta(0.5 * df1 + static_cast<double>(j), 0.5 * df2, y); };
  double sum = 0.0;
  double mass = 0.0;
  // Walk outward from the Poisson mode until the remaining weight is negligible.
  for (long j = mode; j >= 0; --j) {
    const double w = weight(j);
    sum += w * term(j);
    mass += w;
    if (w < 1e-17 && j < mode) break;
  }
  for (long j = mode + 1;; ++j) {
    const double w = weight(j);
    sum += w * term(j);
    mass += w;
    if (w < 1e-17 || j > mode + 100000) break;
  }
  (void)mass;
  return std::clamp(sum, 0.0, 1.0);
}

// ---- studentized range -------------------------------------------------------------

namespace {

// 16-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGlX{0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                     0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                     0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlW{0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                     0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                     0.0622535239386479, 0.0271524594117541};

template <typename F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    const double half = 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < kGlX.size(); ++i) {
      s += kGlW[i] * (f(mid - half * kGlX[i]) + f(mid + half * kGlX[i]));
    }
    total += s * half;
  }
  return total;
}

// P(range of k iid standard normals < w).
double range_cdf_normal(double w, int k) {
  if (w <= 0.0) return 0.0;
  if (k == 2) return std::erf(w / 2.0);  // 2*Phi(w/sqrt2) - 1
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto integrand = [&](double z) {
    const double diff = normal_cdf(z) - normal_cdf(z - w);
    if (diff <= 0.0) return 0.0;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z) * std::pow(diff, k - 1);
  };
  // The normal density factor is below 1e-16 outside [-8.5, 8.5].
  return std::clamp(k * gauss_legendre(integrand, -8.5, 8.5, 34), 0.0, 1.0);
}

}  // namespace

double studentized_range_cdf(double q, int k, double df) {
  require(k >= 2, "studentized range: k must be >= 2");
  if (q <= 0.0) return 0.0;
  if (df <= 0.0 || std::isinf(df) || df > 1e6) return range_cdf_normal(q, k);
  // Density of s = sqrt(chi2_df / df).
  const double log_norm = 0.5 * df * std::log(df) - std::lgamma(0.5 * df) - (0.5 * df - 1.0) * std::log(2.0);
  auto density = [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(log_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s);
  };
  const double sd = 1.0 / std::sqrt(2.0 * df);
  const double lo = std::max(0.0, 1.0 - 14.0 * sd);
  const double hi = 1.0 + 14.0 * sd + (df < 10.0 ? 6.0 : 0.0);
  const int panels = df < 10.0 ? 48 : 24;
  const double v =
      gauss_legendre([&](double s) { return density(s) * range_cdf_normal(q * s, k); }, lo, hi, panels);
  return std::clamp(v, 0.0, 1.0);
}

double studentized_range_sf(double q, int k, double df) { return 1.0 - studentized_range_cdf(q, k, df); }

double studentized_range_quantile(double p, int k, double df) {
  require(p > 0.0 && p < 1.0, "studentized range quantile: p must be in (0,1)");
  double lo = 0.0;
  double hi = 2.0;
  while (studentized_range_cdf(hi, k, df) < p) {
    hi *= 2.0;
    require(hi < 1e6, "studentized range quantile: no bracket");
  }
  for (int i = 0; i < 60 && hi - lo > 1e-10; ++i) {
    const double mid = 0.5 * (lo + hi);
    (studentized_range_cdf(mid, k, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace auav::stats
