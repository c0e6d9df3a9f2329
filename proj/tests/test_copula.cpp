#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tailasym/copula.hpp"
#include "tailasym/errors.hpp"
#include "tailasym/special_functions.hpp"

using namespace tailasym;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<CopulaModel> catalogue() {
  return {CopulaModel::independence(), CopulaModel::gaussian(-0.5), CopulaModel::gaussian(0.8),
          CopulaModel::fgm(-1.0),      CopulaModel::fgm(0.7),       CopulaModel::plackett(0.2),
          CopulaModel::plackett(6.0),  CopulaModel::frank(-5.0),    CopulaModel::frank(3.0),
          CopulaModel::clayton(-1.0),  CopulaModel::clayton(-0.3),  CopulaModel::clayton(1.0),
          CopulaModel::clayton(20.0),  CopulaModel::gumbel(1.0),    CopulaModel::gumbel(2.5),
          CopulaModel::amh(-1.0),      CopulaModel::amh(0.7),       CopulaModel::amh(1.0),
          CopulaModel::bb7(1.0, 7.27), CopulaModel::bb7(1.94, 1.71), CopulaModel::bb7(0.3, 1.0),
          CopulaModel::parse("clayton:theta=2,rotate=180"), CopulaModel::parse("bb7:delta=1.94,theta=1.71,rotate=180")};
}

// Clayton diagonal by hand: (2 u^-theta - 1)^(-1/theta).
double clayton_diag(double theta, double u) { return std::pow(2 * std::pow(u, -theta) - 1, -1 / theta); }

} // namespace

TEST_CASE("cdf reference values", "[copula]") {
  CHECK_THAT(CopulaModel::independence().cdf(0.3, 0.6), WithinAbs(0.18, 1e-15));
  CHECK_THAT(CopulaModel::clayton(1.0).cdf(0.25, 0.25), WithinAbs(1.0 / 7.0, 1e-15));
  CHECK_THAT(CopulaModel::gaussian(0.0).cdf(0.3, 0.6), WithinAbs(0.18, 1e-14));
  // Gaussian against the bivariate normal at the quantiles.
  const double h = normal_quantile(0.2), k = normal_quantile(0.7);
  CHECK_THAT(CopulaModel::gaussian(0.6).cdf(0.2, 0.7), WithinAbs(bivariate_normal_cdf(h, k, 0.6), 1e-15));
  CHECK_THAT(CopulaModel::gaussian(0.6).cdf(0.5, 0.5), WithinAbs(0.25 + std::asin(0.6) / (2 * M_PI), 1e-12));
  // AMH and FGM closed forms.
  CHECK_THAT(CopulaModel::amh(0.5).cdf(0.3, 0.4), WithinRel(0.12 / (1 - 0.5 * 0.7 * 0.6), 1e-14));
  CHECK_THAT(CopulaModel::fgm(0.5).cdf(0.3, 0.4), WithinRel(0.12 * (1 + 0.5 * 0.7 * 0.6), 1e-14));
}

TEST_CASE("survival diagonal", "[copula]") {
  CHECK_THAT(CopulaModel::clayton(1.0).survival_diagonal(0.25), WithinAbs(0.1, 1e-15));
  CHECK_THAT(CopulaModel::independence().survival_diagonal(0.25), WithinAbs(0.0625, 1e-15));
  for (const auto& m : catalogue()) CHECK(m.survival_diagonal(0.5) == m.cdf(0.5, 0.5));
  CHECK_THROWS_AS(CopulaModel::independence().survival_diagonal(0.6), DomainError);
}

TEST_CASE("copula margins, survival identity and 2-increasingness", "[copula]") {
  for (const auto& m : catalogue()) {
    INFO(m.spec());
    for (double u : {0.0, 0.013, 0.25, 0.5, 0.77, 0.999, 1.0}) {
      CHECK_THAT(m.cdf(u, 0.0), WithinAbs(0.0, 1e-15));
      CHECK_THAT(m.cdf(0.0, u), WithinAbs(0.0, 1e-15));
      CHECK_THAT(m.cdf(u, 1.0), WithinAbs(u, 1e-14));
      CHECK_THAT(m.cdf(1.0, u), WithinAbs(u, 1e-14));
    }
    for (double a : {0.1, 0.4, 0.8})
      for (double b : {0.05, 0.5, 0.95})
        CHECK_THAT(m.survival(a, b), WithinAbs(1 - a - b + m.cdf(a, b), 1e-14));
    const int g = 20;
    double worst = 0.0;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const double a1 = double(i) / g, b1 = double(i + 1) / g, a2 = double(j) / g, b2 = double(j + 1) / g;
        const double vol = m.cdf(b1, b2) - m.cdf(a1, b2) - m.cdf(b1, a2) + m.cdf(a1, a2);
        worst = std::min(worst, vol);
      }
    CHECK(worst >= -1e-12);
  }
}

TEST_CASE("parameter domains and spec parsing", "[copula]") {
  CHECK_THROWS_AS(CopulaModel::clayton(0.0), DomainError);
  CHECK_THROWS_AS(CopulaModel::clayton(-1.5), DomainError);
  CHECK_THROWS_AS(CopulaModel::clayton(2e4), DomainError);
  CHECK_THROWS_AS(CopulaModel::frank(0.0), DomainError);
  CHECK_THROWS_AS(CopulaModel::amh(1.2), DomainError);
  CHECK_THROWS_AS(CopulaModel::gaussian(1.0), DomainError);
  CHECK_THROWS_AS(CopulaModel::gumbel(0.9), DomainError);
  CHECK_THROWS_AS(CopulaModel::plackett(1.0), DomainError);
  CHECK_THROWS_AS(CopulaModel::bb7(0.0, 2.0), DomainError);
  CHECK_THROWS_AS(CopulaModel::bb7(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(CopulaModel::fgm(-1.1), DomainError);
  try {
    CopulaModel::clayton(-2.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("theta") != std::string::npos);
  }
  const auto m = CopulaModel::parse("BB7: Delta=1.94, theta=1.71");
  CHECK(m.family() == Family::BB7);
  CHECK(m.param(0) == 1.94);
  CHECK(m.param(1) == 1.71);
  CHECK(CopulaModel::parse(m.spec()).spec() == m.spec());
  CHECK(CopulaModel::parse("clayton:theta=2,rotate=180").rotated());
  CHECK_THROWS_AS(CopulaModel::parse("nosuch:theta=1"), ConfigError);
  CHECK_THROWS_AS(CopulaModel::parse("clayton"), ConfigError);
  CHECK_THROWS_AS(CopulaModel::parse("clayton:theta=x"), ConfigError);
  CHECK_THROWS_AS(CopulaModel::parse("clayton:theta=1,rho=2"), ConfigError);
}

TEST_CASE("tail summaries", "[copula]") {
  const auto c = tail_summary(CopulaModel::clayton(2.0));
  CHECK_THAT(*c.lambda_lower, WithinAbs(std::sqrt(0.5), 1e-15));
  CHECK(*c.lambda_upper == 0.0);
  const auto b = tail_summary(CopulaModel::bb7(1.0, 7.27));
  CHECK_THAT(*b.lambda_lower, WithinAbs(0.5, 1e-15));
  CHECK_THAT(*b.lambda_upper, WithinAbs(2 - std::pow(2.0, 1 / 7.27), 1e-15));
  CHECK_THAT(*b.lambda_upper, WithinAbs(0.8999, 1e-4));
  const auto i = tail_summary(CopulaModel::independence());
  CHECK(*i.lambda_lower == 0.0);
  CHECK(*i.lambda_upper == 0.0);
  CHECK(*i.kappa_lower == 2.0);
  CHECK(*i.kappa_upper == 2.0);
  // lambda > 0 forces kappa = 1 wherever kappa is catalogued.
  for (const auto& m : catalogue()) {
    const auto t = tail_summary(m);
    if (t.lambda_lower && *t.lambda_lower > 0 && t.kappa_lower) CHECK(*t.kappa_lower == 1.0);
    if (t.lambda_upper && *t.lambda_upper > 0 && t.kappa_upper) CHECK(*t.kappa_upper == 1.0);
  }
  // Rotation swaps the tails.
  const auto r = tail_summary(CopulaModel::parse("clayton:theta=2,rotate=180"));
  CHECK(*r.lambda_lower == 0.0);
  CHECK_THAT(*r.lambda_upper, WithinAbs(std::sqrt(0.5), 1e-15));
}

TEST_CASE("population alpha reference values", "[copula]") {
  CHECK_THAT(alpha_population(CopulaModel::clayton(1.0), 0.25).value(), WithinAbs(std::log(0.7), 1e-14));
  CHECK(alpha_population(CopulaModel::frank(5.0), 0.1).value() == Catch::Approx(0.0).margin(1e-12));
  for (const auto& m : catalogue()) {
    INFO(m.spec());
    CHECK_THAT(alpha_population(m, 0.5).value(), WithinAbs(0.0, 1e-12));
  }
  // Independent route for Clayton: closed-form diagonal on both corners.
  for (double th : {0.5, 2.0, 20.0})
    for (double u : {0.01, 0.1, 0.3}) {
      const double lower = clayton_diag(th, u);
      const double upper = 2 * u - 1 + clayton_diag(th, 1 - u);
      CHECK_THAT(alpha_population(CopulaModel::clayton(th), u).value(), WithinAbs(std::log(upper / lower), 1e-9));
    }
  CHECK(alpha_population(CopulaModel::clayton(-0.3), 0.05).is_pos_inf());
  CHECK_THROWS_AS(alpha_population(CopulaModel::independence(), 0.0), DomainError);
}

TEST_CASE("radially symmetric families have alpha identically zero", "[copula]") {
  const std::vector<CopulaModel> sym{CopulaModel::gaussian(-0.5), CopulaModel::gaussian(0.0),
                                     CopulaModel::gaussian(0.8),  CopulaModel::frank(-5.0),
                                     CopulaModel::frank(3.0),     CopulaModel::fgm(0.9),
                                     CopulaModel::plackett(4.0),  CopulaModel::independence()};
  for (const auto& m : sym)
    for (double u = 0.01; u <= 0.5; u += 0.04) {
      INFO(m.spec() << " u=" << u);
      CHECK(std::abs(alpha_population(m, u).value()) <= 1e-9);
    }
}

TEST_CASE("rotation negates alpha", "[copula]") {
  for (const char* spec : {"clayton:theta=2", "amh:theta=0.6", "bb7:delta=1.94,theta=1.71", "gumbel:theta=1.5"}) {
    const auto m = CopulaModel::parse(spec);
    const auto r = m.reflected();
    for (double u : {0.02, 0.1, 0.3, 0.45}) {
      INFO(spec << " u=" << u);
      CHECK_THAT(alpha_population(r, u).value(), WithinAbs(-alpha_population(m, u).value(), 1e-10));
    }
  }
}

TEST_CASE("Clayton lower-tail ratio approaches its coefficient", "[copula]") {
  for (double th : {0.5, 1.0, 3.0}) {
    const auto m = CopulaModel::clayton(th);
    const double lam = std::pow(2.0, -1.0 / th);
    double prev = 1e9;
    for (double u : {1e-3, 1e-4, 1e-5}) {
      const double gap = std::abs(m.diagonal(u) / u - lam);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-2);
  }
}

TEST_CASE("alpha(0) from catalogued tail behaviour", "[copula]") {
  CHECK(alpha_limit(CopulaModel::clayton(5.0)).value->is_neg_inf());
  const auto a = alpha_limit(CopulaModel::amh(0.7));
  CHECK(a.rule == LimitRule::ClosedForm);
  CHECK(a.value->value() == std::log(1 - 0.49));
  CHECK_THAT(a.value->value(), WithinAbs(-0.67334, 1e-5));
  CHECK(alpha_limit(CopulaModel::amh(1.0)).value->is_neg_inf());
  const auto b = alpha_limit(CopulaModel::bb7(1.94, 1.71));
  // log(lambda_U / lambda_L) with lambda_L = 2^(-1/delta), lambda_U = 2 - 2^(1/theta).
  CHECK_THAT(b.value->value(), WithinAbs(std::log(2 - std::pow(2.0, 1 / 1.71)) + std::log(2.0) / 1.94, 1e-12));
  CHECK_THAT(b.value->value(), WithinAbs(-0.335507, 1e-6));
  CHECK(alpha_limit(CopulaModel::frank(3.0)).value->value() == 0.0);
  CHECK(alpha_limit(CopulaModel::clayton(-0.3)).value->is_pos_inf());
  CHECK(alpha_limit(CopulaModel::gumbel(2.0)).value->is_pos_inf());
  CHECK(alpha_limit(CopulaModel::parse("clayton:theta=5,rotate=180")).value->is_pos_inf());
  // The limit agrees with the curve at small u where it is finite.
  CHECK_THAT(alpha_population(CopulaModel::bb7(1.94, 1.71), 1e-7).value(), WithinAbs(b.value->value(), 1e-3));
  CHECK_THAT(alpha_population(CopulaModel::amh(0.4), 1e-7).value(), WithinAbs(std::log(1 - 0.16), 1e-5));
}
