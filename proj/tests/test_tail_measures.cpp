#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "tailasym/errors.hpp"
#include "tailasym/rng.hpp"
#include "tailasym/sampling.hpp"
#include "tailasym/tail_measures.hpp"

using namespace tailasym;
using Catch::Matchers::WithinAbs;

TEST_CASE("alpha curves", "[tail_measures]") {
  const double g1[] = {0.1, 0.3, 0.5};
  const auto c = alpha_curve(CopulaModel::independence(), g1);
  REQUIRE(c.values.size() == 3);
  for (const auto& v : c.values) CHECK(v.value() == Catch::Approx(0.0).margin(1e-13));
  const double g2[] = {0.25, 0.5};
  const auto k = alpha_curve(CopulaModel::clayton(1.0), g2);
  CHECK_THAT(k.values[0].value(), WithinAbs(std::log(0.7), 1e-14));
  CHECK(k.values[1].value() == Catch::Approx(0.0).margin(1e-14));
  const double g3[] = {0.01};
  // AMH theta = 1: alpha(u) = log(2u(2 - u)/(1 + u)).
  CHECK_THAT(alpha_curve(CopulaModel::amh(1.0), g3).values[0].value(), WithinAbs(std::log(0.02 * 1.99 / 1.01), 1e-12));
  const double bad1[] = {0.2, 0.1};
  const double bad2[] = {0.0, 0.1};
  const double bad3[] = {0.3, 0.6};
  CHECK_THROWS_AS(alpha_curve(CopulaModel::independence(), bad1), DomainError);
  CHECK_THROWS_AS(alpha_curve(CopulaModel::independence(), bad2), DomainError);
  CHECK_THROWS_AS(alpha_curve(CopulaModel::independence(), bad3), DomainError);
}

TEST_CASE("grid parsing", "[tail_measures]") {
  const auto g = parse_u_grid("0.1:0.5:0.1");
  REQUIRE(g.size() == 5);
  CHECK(g.back() == 0.5);
  CHECK(parse_u_grid("0.2,0.3").size() == 2);
  CHECK_THROWS_AS(parse_u_grid("0.1:0.5"), ConfigError);
  CHECK_THROWS_AS(parse_u_grid("0.1:0.6:0.1"), DomainError);
  CHECK_THROWS_AS(parse_u_grid("a,b"), ConfigError);
}

TEST_CASE("numeric alpha(0) from diagonal curvature", "[tail_measures]") {
  const double seq[] = {1e-2, 1e-3, 1e-4};
  for (double th : {0.1, 0.4, 0.7}) {
    const auto r = alpha_zero_numeric(CopulaModel::amh(th), seq);
    INFO("theta=" << th);
    CHECK_THAT(r.value.value(), WithinAbs(std::log(1 - th * th), 1e-2));
    CHECK(r.status != LimitStatus::Inapplicable);
  }
  const auto small = alpha_zero_numeric(CopulaModel::amh(0.1), seq);
  CHECK(small.status == LimitStatus::Converged);
  const auto ind = alpha_zero_numeric(CopulaModel::independence(), seq);
  CHECK(ind.status == LimitStatus::Converged);
  CHECK_THAT(ind.value.value(), WithinAbs(0.0, 1e-4));
  const auto cl = alpha_zero_numeric(CopulaModel::clayton(-0.3), seq);
  CHECK(cl.value.is_pos_inf());
  CHECK(cl.status == LimitStatus::DivergingUp);
  // Tail dependence breaks the curvature route; it must not claim a value.
  CHECK(alpha_zero_numeric(CopulaModel::clayton(1.0), seq).status == LimitStatus::Inapplicable);
  const double bad[] = {1e-3, 1e-2};
  CHECK_THROWS_AS(alpha_zero_numeric(CopulaModel::independence(), bad), DomainError);
  const double big[] = {0.05};
  CHECK_THROWS_AS(alpha_zero_numeric(CopulaModel::independence(), big), DomainError);
}

TEST_CASE("beta measure", "[tail_measures]") {
  CHECK_THAT(beta(CopulaModel::clayton(1.0), 0.25, 1.0), WithinAbs((0.1 - 1.0 / 7) / 0.25, 1e-14));
  CHECK_THAT(beta(CopulaModel::clayton(1.0), 0.25, 1.0), WithinAbs(-0.171429, 1e-6));
  for (double u : {0.01, 0.2, 0.5}) CHECK_THAT(beta(CopulaModel::frank(3.0), u, 1.0), WithinAbs(0.0, 1e-12));
  CHECK(std::abs(beta(CopulaModel::clayton(-0.3), 1e-6, 1.0)) < 1e-3);
  CHECK_THROWS_AS(beta(CopulaModel::independence(), 0.2, 0.5), DomainError);

  // Fuzz: bounded by one at kappa = 1 and sign-consistent with alpha.
  Philox4x32 eng({77, 0});
  for (int i = 0; i < 400; ++i) {
    CopulaModel m = CopulaModel::independence();
    switch (uniform_index(eng, 5)) {
    case 0: m = CopulaModel::clayton(-1.0 + 15.0 * uniform_open(eng) + 1e-3); break;
    case 1: m = CopulaModel::amh(-1.0 + 2.0 * uniform_open(eng)); break;
    case 2: m = CopulaModel::gumbel(1.0 + 9.0 * uniform_open(eng)); break;
    case 3: m = CopulaModel::bb7(0.1 + 5.0 * uniform_open(eng), 1.0 + 5.0 * uniform_open(eng)); break;
    default: m = CopulaModel::frank(0.5 + 10.0 * uniform_open(eng)); break;
    }
    const double u = 0.001 + 0.499 * uniform_open(eng);
    const double b = beta(m, u, 1.0);
    INFO(m.spec() << " u=" << u);
    CHECK(b >= -1.0);
    CHECK(b <= 1.0);
    const ExtendedReal a = alpha_population(m, u);
    if (a.is_finite() && a.value() != 0.0 && b != 0.0) CHECK((a.value() > 0) == (b > 0));
  }
}

TEST_CASE("sigma3 lattice search", "[tail_measures]") {
  CHECK(sigma3(CopulaModel::independence(), 50).value <= 1e-15);
  CHECK(sigma3(CopulaModel::frank(5.0), 200).value <= 1e-10);
  const auto s = sigma3(CopulaModel::clayton(1.0), 400, Execution::Parallel, true);
  CHECK(s.value > 0.0);
  CHECK(s.spacing == 1.0 / 400);
  REQUIRE(s.doubled_value);
  CHECK(std::abs(*s.doubled_value - s.value) <= 1e-3);
  const auto dense = sigma3(CopulaModel::clayton(1.0), 3200);
  CHECK(std::abs(dense.value - s.value) <= 1e-3);
  // Serial reference and parallel search agree exactly, including the location.
  const auto serial = sigma3(CopulaModel::bb7(1.94, 1.71), 300, Execution::Serial);
  const auto parallel = sigma3(CopulaModel::bb7(1.94, 1.71), 300, Execution::Parallel);
  CHECK(serial.value == parallel.value);
  CHECK(serial.argmax_u1 == parallel.argmax_u1);
  CHECK(serial.argmax_u2 == parallel.argmax_u2);
  // Reflection leaves the distance unchanged.
  for (const char* spec : {"clayton:theta=2", "amh:theta=0.8", "gumbel:theta=3"}) {
    const auto m = CopulaModel::parse(spec);
    CHECK_THAT(sigma3(m.reflected(), 200).value, WithinAbs(sigma3(m, 200).value, 1e-14));
  }
}

TEST_CASE("sample sigma3 matches a direct lattice recount", "[tail_measures]") {
  const PairedSample s = sample_copula(CopulaModel::clayton(2.0), 300, {3, 0});
  const std::size_t r = 40;
  double best = 0.0;
  for (std::size_t i = 0; i <= r; ++i)
    for (std::size_t j = 0; j <= r; ++j) {
      const double a = double(i) / r, b = double(j) / r;
      double lo = 0, hi = 0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        lo += s.x1[k] <= a && s.x2[k] <= b;
        hi += s.x1[k] >= 1.0 - a && s.x2[k] >= 1.0 - b;
      }
      best = std::max(best, std::abs(lo - hi) / s.size());
    }
  CHECK(sigma3_sample(s, r).value == best);
}

TEST_CASE("rho_K on samples", "[tail_measures]") {
  const PairedSample ind = sample_copula(CopulaModel::independence(), 100000, {11, 0});
  const auto r0 = rho_k(ind, 0.5, WeightFunction::X);
  REQUIRE(r0);
  CHECK(std::abs(*r0) <= 0.02);

  PairedSample two;
  two.scale = Scale::Uniform;
  two.x1 = {0.01, 0.02, 0.9, 0.95, 0.97, 0.5};
  two.x2 = {0.02, 0.01, 0.91, 0.96, 0.99, 0.5};
  CHECK_FALSE(rho_k(two, 0.1, WeightFunction::X));

  const PairedSample cl = sample_copula(CopulaModel::clayton(20.0), 100000, {12, 0});
  const auto rc = rho_k(cl, 0.2, WeightFunction::X);
  REQUIRE(rc);
  CHECK(*rc > 0.0);
  const double grid[] = {0.1, 0.2};
  const auto neg = rho_k_curve(cl, grid, WeightFunction::X2, true);
  const auto pos = rho_k_curve(cl, grid, WeightFunction::X2, false);
  CHECK(neg.values[1].value() == -pos.values[1].value());
  CHECK(apply_weight(WeightFunction::X, 0.0) == 0.0);
  CHECK(apply_weight(WeightFunction::X2, 0.0) == 0.0);
  CHECK(apply_weight(WeightFunction::X4, 0.5) == 0.0625);
}

TEST_CASE("alpha matrix", "[tail_measures]") {
  const PairedSample s = sample_copula(CopulaModel::clayton(2.0), 2000, {21, 0});
  std::vector<std::vector<double>> cols{s.x1, s.x1};
  const auto m = alpha_matrix(cols, 0.2);
  CHECK(m.at(0, 1) == m.at(0, 0));
  CHECK(m.at(1, 0) == m.at(1, 1));

  // Reflecting a column flips the roles of the two corners considered.
  std::vector<double> refl(s.x2.size());
  for (std::size_t i = 0; i < refl.size(); ++i) refl[i] = 1.0 - s.x2[i];
  std::vector<std::vector<double>> c2{s.x1, refl};
  const auto r = alpha_matrix(c2, 0.2);
  std::size_t ll = 0, ur = 0;  // counts for (U1 <= u, 1-U2 <= u) and (U1 >= 1-u, 1-U2 >= 1-u)
  for (std::size_t i = 0; i < s.size(); ++i) {
    ll += s.x1[i] <= 0.2 && refl[i] <= 0.2;
    ur += s.x1[i] >= 0.8 && refl[i] >= 0.8;
  }
  CHECK(r.at(0, 1) == log_ratio(double(ur) / s.size(), double(ll) / s.size()));
  std::vector<std::vector<double>> c3{refl, s.x1};
  CHECK(alpha_matrix(c3, 0.2).at(0, 1) == r.at(0, 1));

  const auto cols3 = sample_clayton_frailty(5.0, 3, 100000, {31, 0});
  const auto a3 = alpha_matrix(cols3, 0.1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(a3.at(i, j).value() < 0.0);
  std::vector<std::vector<double>> uneven{{0.1, 0.2}, {0.3}};
  CHECK_THROWS_AS(alpha_matrix(uneven, 0.2), DataError);
}

TEST_CASE("curve CSV schema", "[tail_measures]") {
  TailCurve c;
  c.u_grid = {0.1, 0.5};
  c.values = {ExtendedReal::neg_inf(), ExtendedReal::finite(0.0)};
  c.meta = {{"kappa", 1}};
  std::ostringstream os;
  write_curve_csv(os, c);
  CHECK(os.str() == "u,value,kind,param_json\n0.1,-inf,alpha,\"{\"\"kappa\"\":1}\"\n0.5,0,alpha,\"{\"\"kappa\"\":1}\"\n");
}
