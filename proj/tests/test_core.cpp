#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "tailasym/errors.hpp"
#include "tailasym/extended_real.hpp"
#include "tailasym/rng.hpp"

using namespace tailasym;
using Catch::Matchers::WithinAbs;

TEST_CASE("log_ratio follows the extended-log conventions", "[core]") {
  CHECK(log_ratio(0.0, 0.0) == ExtendedReal::finite(0.0));
  CHECK(log_ratio(0.0, 0.3).is_neg_inf());
  CHECK(log_ratio(0.3, 0.0).is_pos_inf());
  CHECK_THAT(log_ratio(0.7, 0.1).value(), WithinAbs(std::log(7.0), 1e-15));
}

TEST_CASE("ExtendedReal ordering and formatting", "[core]") {
  const auto ni = ExtendedReal::neg_inf();
  const auto pi = ExtendedReal::pos_inf();
  const auto z = ExtendedReal::finite(0.0);
  CHECK(ni < z);
  CHECK(z < pi);
  CHECK(ni <= ni);
  CHECK_FALSE(pi < pi);
  CHECK((-pi) == ni);
  CHECK(pi.to_string() == "+inf");
  CHECK(ni.to_string() == "-inf");
  CHECK(ExtendedReal::finite(0.25).to_string() == "0.25");
  CHECK(parse_extended("-inf").is_neg_inf());
  CHECK(parse_extended("+inf").is_pos_inf());
  CHECK(parse_extended("1.5").value() == 1.5);
  CHECK_THROWS_AS(parse_extended("abc"), DataError);
  CHECK(ExtendedReal::from_double(std::numeric_limits<double>::infinity()).is_pos_inf());
  CHECK(std::isinf(ni.to_double()));
}

TEST_CASE("Philox4x32-10 known-answer vectors", "[core]") {
  using B = Philox4x32::Block;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::encrypt(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::encrypt(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::encrypt(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct", "[core]") {
  Philox4x32 a({42, 3}), b({42, 3}), c({42, 4}), d({43, 3});
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  const SeedSpec s = bootstrap_stream(9, 5, 17);
  CHECK(s.master_seed == 9);
  CHECK((s.stream_id & kBootstrapBit) != 0);
  CHECK(((s.stream_id >> 32) & 0x7fffffffu) == 5);
  CHECK((s.stream_id & 0xffffffffu) == 17);
}

TEST_CASE("variate helpers", "[core]") {
  Philox4x32 eng({1, 0});
  const int n = 200000;
  double sum_u = 0.0, sum_e = 0.0, sum_z = 0.0, sum_z2 = 0.0;
  std::vector<int> buckets(7, 0);
  for (int i = 0; i < n; ++i) {
    const double u = uniform_open(eng);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum_u += u;
    sum_e += exponential(eng);
    const double z = standard_normal(eng);
    sum_z += z;
    sum_z2 += z * z;
    const auto k = uniform_index(eng, 7);
    REQUIRE(k < 7);
    ++buckets[k];
  }
  CHECK_THAT(sum_u / n, WithinAbs(0.5, 4 * std::sqrt(1.0 / 12 / n)));
  CHECK_THAT(sum_e / n, WithinAbs(1.0, 4 * std::sqrt(1.0 / n)));
  CHECK_THAT(sum_z / n, WithinAbs(0.0, 4 * std::sqrt(1.0 / n)));
  CHECK_THAT(sum_z2 / n, WithinAbs(1.0, 4 * std::sqrt(2.0 / n)));
  for (int c : buckets) CHECK_THAT(c / double(n), WithinAbs(1.0 / 7, 4 * std::sqrt((1.0 / 7) * (6.0 / 7) / n)));
}

TEST_CASE("gamma variates have the right mean in log space", "[core]") {
  for (double shape : {0.05, 0.5, 1.0, 3.0}) {
    Philox4x32 eng({5, 1});
    const int n = 100000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += std::exp(log_gamma_variate(eng, shape));
    mean /= n;
    CHECK_THAT(mean, WithinAbs(shape, 5 * std::sqrt(shape / n)));
  }
}
