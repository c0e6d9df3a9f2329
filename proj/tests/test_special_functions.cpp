#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>

#include "tailasym/special_functions.hpp"

using namespace tailasym;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth,
                        double fa, double fm, double fb, double whole) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
  return adaptive_simpson(f, a, m, eps / 2, depth - 1, fa, flm, fm, left) +
         adaptive_simpson(f, m, b, eps / 2, depth - 1, fm, frm, fb, right);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps = 1e-15) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, eps, 50, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb));
}

// Independent route: Phi2(h,k;rho) = Phi(h)Phi(k) + int_0^rho phi2(h,k;r) dr.
double bvn_oracle(double h, double k, double rho) {
  auto phi2 = [&](double r) {
    const double s = 1.0 - r * r;
    return std::exp(-(h * h - 2 * r * h * k + k * k) / (2 * s)) / (2 * std::numbers::pi * std::sqrt(s));
  };
  const double base = 0.5 * std::erfc(-h / std::sqrt(2.0)) * 0.5 * std::erfc(-k / std::sqrt(2.0));
  return base + integrate(phi2, 0.0, rho);
}

} // namespace

TEST_CASE("normal CDF and quantile", "[special]") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK_THAT(normal_cdf(1.959963984540054), WithinAbs(0.975, 1e-15));
  CHECK_THAT(normal_upper_critical(0.05), WithinAbs(1.6448536269514722, 1e-12));
  CHECK_THAT(normal_upper_critical(0.025), WithinAbs(1.959963984540054, 1e-12));
  for (double p : {1e-300, 1e-20, 1e-8, 0.001, 0.1, 0.3, 0.5, 0.77, 0.999, 1 - 1e-12}) {
    const double x = normal_quantile(p);
    CHECK_THAT(normal_cdf(x), WithinRel(p, 1e-12));
  }
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isinf(normal_quantile(1.0)));
}

TEST_CASE("bivariate normal CDF against closed forms and quadrature", "[special]") {
  for (double rho : {-0.99, -0.5, 0.0, 0.3, 0.8, 0.999}) {
    const double exact = 0.25 + std::asin(rho) / (2 * std::numbers::pi);
    CHECK_THAT(bivariate_normal_cdf(0.0, 0.0, rho), WithinAbs(exact, 1e-14));
  }
  CHECK_THAT(bivariate_normal_cdf(-0.5244, 0.2533, 0.0), WithinAbs(normal_cdf(-0.5244) * normal_cdf(0.2533), 1e-15));
  for (double rho : {-0.95, -0.6, -0.2, 0.1, 0.45, 0.7, 0.95}) {
    for (double h : {-3.0, -1.0, -0.2, 0.5, 2.0}) {
      for (double k : {-2.5, -0.7, 0.0, 1.3}) {
        CHECK_THAT(bivariate_normal_cdf(h, k, rho), WithinAbs(bvn_oracle(h, k, rho), 1e-12));
      }
    }
  }
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly", "[special]") {
  for (int n : {6, 12, 20}) {
    const QuadratureRule r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK_THAT(s, WithinAbs(exact, 1e-13));
    }
  }
}

TEST_CASE("chi-squared and Student-t tails", "[special]") {
  for (double x : {0.1, 1.0, 4.6, 20.0}) {
    CHECK_THAT(chi2_upper_tail(x, 2.0), WithinRel(std::exp(-x / 2), 1e-13));
    CHECK_THAT(chi2_upper_tail(x, 1.0), WithinRel(std::erfc(std::sqrt(x / 2)), 1e-12));
  }
  for (double t : {-50.0, -2.0, -0.3, 0.0, 1.0, 7.0}) {
    CHECK_THAT(student_t_cdf(t, 1.0), WithinAbs(0.5 + std::atan(t) / std::numbers::pi, 1e-14));
    CHECK_THAT(student_t_cdf(t, 2.0), WithinAbs(0.5 + t / (2 * std::sqrt(2 + t * t)), 1e-14));
  }
  CHECK_THAT(student_t_cdf(1.6449, 1e6), WithinAbs(0.95, 1e-4));
  CHECK(student_t_cdf(-30.0, 1e6) > 0.0);
}

TEST_CASE("Kolmogorov distribution", "[special]") {
  CHECK_THAT(kolmogorov_sf(1.3581), WithinAbs(0.05, 2e-4));
  CHECK_THAT(kolmogorov_sf(1.6276), WithinAbs(0.01, 1e-4));
  std::vector<double> v{0.1, 0.2, 0.3, 0.4};
  CHECK_THAT(ks_statistic_sorted(v, [](double x) { return x; }), WithinAbs(0.6, 1e-15));
}
