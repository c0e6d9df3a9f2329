#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tailasym/errors.hpp"
#include "tailasym/sampling.hpp"
#include "tailasym/special_functions.hpp"

using namespace tailasym;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<CopulaModel> families() {
  return {CopulaModel::independence(), CopulaModel::gaussian(0.7),  CopulaModel::fgm(0.8),
          CopulaModel::plackett(5.0),  CopulaModel::frank(-4.0),    CopulaModel::clayton(2.0),
          CopulaModel::clayton(-0.5),  CopulaModel::gumbel(2.0),    CopulaModel::amh(0.6),
          CopulaModel::bb7(1.94, 1.71), CopulaModel::parse("clayton:theta=3,rotate=180")};
}

double empirical_corner(const PairedSample& s, double a, double b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < s.size(); ++i) c += s.x1[i] <= a && s.x2[i] <= b;
  return double(c) / s.size();
}

} // namespace

TEST_CASE("sampler reference checks", "[sampling]") {
  const auto ind = sample_copula(CopulaModel::independence(), 1000000, {1, 0});
  CHECK_THAT(empirical_corner(ind, 0.5, 0.5), WithinAbs(0.25, 0.002));
  const auto cl = sample_copula(CopulaModel::clayton(20.0), 1000000, {2, 0});
  CHECK_THAT(empirical_corner(cl, 0.1, 0.1), WithinAbs(CopulaModel::clayton(20.0).cdf(0.1, 0.1), 0.002));
  const auto bb = sample_copula(CopulaModel::bb7(1.0, 1.71), 1000000, {3, 0});
  CHECK_THAT(empirical_corner(bb, 0.005, 0.005) / 0.005, WithinAbs(0.5, 0.05));
}

TEST_CASE("samples are reproducible and stay in the open unit square", "[sampling]") {
  for (const auto& m : families()) {
    INFO(m.spec());
    const auto a = sample_copula(m, 2000, {9, 4});
    const auto b = sample_copula(m, 2000, {9, 4});
    const auto c = sample_copula(m, 2000, {9, 5});
    CHECK(a.x1 == b.x1);
    CHECK(a.x2 == b.x2);
    CHECK(a.x1 != c.x1);
    CHECK(a.scale == Scale::Uniform);
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a.x1[i] > 0.0);
      REQUIRE(a.x1[i] < 1.0);
      REQUIRE(a.x2[i] > 0.0);
      REQUIRE(a.x2[i] < 1.0);
    }
  }
}

TEST_CASE("margins are uniform and the diagonal matches the model", "[sampling]") {
  const std::size_t n = 100000;
  for (const auto& m : families()) {
    INFO(m.spec());
    const auto s = sample_copula(m, n, {17, 0});
    for (double t = 0.1; t < 0.95; t += 0.1) {
      const double f1 = double(std::count_if(s.x1.begin(), s.x1.end(), [&](double v) { return v <= t; })) / n;
      const double f2 = double(std::count_if(s.x2.begin(), s.x2.end(), [&](double v) { return v <= t; })) / n;
      CHECK(std::abs(f1 - t) < 4 * std::sqrt(0.25 / n));
      CHECK(std::abs(f2 - t) < 4 * std::sqrt(0.25 / n));
    }
    double worst = 0.0;
    for (double u = 0.05; u <= 0.5 + 1e-12; u += 0.05) worst = std::max(worst, std::abs(empirical_corner(s, u, u) - m.diagonal(u)));
    CHECK(worst < 5 * std::sqrt(1.0 / n));
  }
}

TEST_CASE("conditional quantile inverts the conditional CDF", "[sampling]") {
  for (const auto& m : families()) {
    if (m.family() == Family::Gaussian) continue;
    INFO(m.spec());
    for (double u1 : {0.001, 0.2, 0.5, 0.93}) {
      for (double p : {0.01, 0.4, 0.9}) {
        const double u2 = conditional_quantile(m, p, u1);
        CHECK_THAT(m.conditional_cdf(u2, u1), WithinAbs(p, 1e-9));
      }
    }
  }
}

TEST_CASE("Clayton with Cauchy margins", "[sampling]") {
  const auto raw = sample_clayton_cauchy(20.0, 100000, {4, 0});
  CHECK(raw.scale == Scale::Raw);
  const double below = double(std::count_if(raw.x1.begin(), raw.x1.end(), [](double v) { return v <= 0; })) / raw.size();
  CHECK_THAT(below, WithinAbs(0.5, 0.005));
  const auto uni = sample_copula(CopulaModel::clayton(20.0), 100000, {4, 0});
  double worst = 0.0;
  for (std::size_t i = 0; i < uni.size(); ++i) {
    worst = std::max(worst, std::abs(cauchy_cdf(raw.x1[i]) - uni.x1[i]));
    worst = std::max(worst, std::abs(cauchy_cdf(raw.x2[i]) - uni.x2[i]));
  }
  CHECK(worst < 1e-12);
  CHECK(cauchy_cdf(0.0) == 0.5);
  CHECK_THAT(cauchy_cdf(1.0), WithinAbs(0.75, 1e-15));
  CHECK_THROWS_AS(sample_clayton_cauchy(-1.0, 10, {1, 0}), DomainError);
}

TEST_CASE("common-frailty Clayton helper has Clayton pairs", "[sampling]") {
  const auto cols = sample_clayton_frailty(2.0, 3, 100000, {8, 0});
  REQUIRE(cols.size() == 3);
  PairedSample s;
  s.scale = Scale::Uniform;
  s.x1 = cols[0];
  s.x2 = cols[2];
  CHECK_THAT(empirical_corner(s, 0.2, 0.3), WithinAbs(CopulaModel::clayton(2.0).cdf(0.2, 0.3), 0.006));
}
