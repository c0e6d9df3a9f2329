#pragma once

#include <span>
#include <vector>

namespace tailasym {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF for p in (0, 1); |error| < 1e-12 over
/// [1e-300, 1 - 1e-16]. Returns -inf / +inf at p = 0 / 1.
double normal_quantile(double p);

/// Upper normal critical value z with P(Z >= z) = tail.
inline double normal_upper_critical(double tail) { return -normal_quantile(tail); }

/// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho,
/// |rho| < 1. Gauss-Legendre quadrature over the correlation parameter
/// (Genz's BVND scheme, 6/12/20 nodes by |rho|), absolute error ~1e-15.
double bivariate_normal_cdf(double h, double k, double rho);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

/// P(X > x) for X ~ chi-squared(dof).
double chi2_upper_tail(double x, double dof);

/// Student-t CDF with nu > 0 degrees of freedom (standardised), evaluated
/// through the regularised incomplete beta function.
double student_t_cdf(double t, double nu);

/// Asymptotic Kolmogorov survival function P(K > x) = 2 sum (-1)^(k-1) e^(-2k^2x^2).
double kolmogorov_sf(double x);

/// One-sample KS statistic sup|F_n - F| for sorted data against a CDF.
template <class Cdf>
double ks_statistic_sorted(std::span<const double> sorted, Cdf cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double hi = static_cast<double>(i + 1) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

/// Stephens' finite-sample p-value for the one-sample KS statistic.
double ks_pvalue(double d, std::size_t n);

} // namespace tailasym
