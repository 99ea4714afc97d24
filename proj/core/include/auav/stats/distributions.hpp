#pragma once

namespace auav::stats {

// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz).
double incomplete_beta(double a, double b, double x);
// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double normal_cdf(double z);
double normal_sf(double z);
double normal_quantile(double p);

double chi2_cdf(double x, double df);
double chi2_sf(double x, double df);

double f_cdf(double x, double df1, double df2);
double f_sf(double x, double df1, double df2);
double f_quantile(double p, double df1, double df2);

double t_sf_two_sided(double t, double df);

// Noncentral F with noncentrality lambda, as a Poisson(lambda/2) mixture of
// incomplete beta terms.
double noncentral_f_cdf(double x, double df1, double df2, double lambda);

// Studentized range distribution for k groups and df error degrees of freedom
// (df <= 0 means infinite), by Gauss-Legendre quadrature.
double studentized_range_cdf(double q, int k, double df);
double studentized_range_sf(double q, int k, double df);
double studentized_range_quantile(double p, int k, double df);

}  // namespace auav::stats
