#pragma once

// Brute-force reference computations shared by the unit and acceptance tests.
// Everything here is written from the definitions, with no sorting, indexing
// or caching, so it can be compared bit for bit with the library.

#include <cmath>
#include <cstddef>
#include <utility>

#include "tailasym/extended_real.hpp"
#include "tailasym/paired_sample.hpp"

namespace oracle {

using tailasym::ExtendedReal;
using tailasym::PairedSample;

inline std::pair<std::size_t, std::size_t> corner_counts(const PairedSample& s, double u) {
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.x1[i] <= u && s.x2[i] <= u) ++lo;
    if (s.x1[i] >= 1 - u && s.x2[i] >= 1 - u) ++hi;
  }
  return {lo, hi};
}

inline ExtendedReal alpha(const PairedSample& s, double u) {
  const auto [lo, hi] = corner_counts(s, u);
  const double n = static_cast<double>(s.size());
  return tailasym::log_ratio(static_cast<double>(hi) / n, static_cast<double>(lo) / n);
}

inline double sigma(const PairedSample& s, double u) {
  const auto [lo, hi] = corner_counts(s, u);
  if (lo == 0 || hi == 0) return INFINITY;
  const double n = static_cast<double>(s.size());
  const double tl = static_cast<double>(lo) / n, tu = static_cast<double>(hi) / n;
  return std::sqrt((tl + tu) / (tl * tu));
}

// rank_i / (n + 1) with rank_i = #{k : x_k <= x_i}, by double loop.
inline PairedSample pseudo(const PairedSample& raw) {
  PairedSample p;
  p.scale = tailasym::Scale::Pseudo;
  const std::size_t n = raw.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r1 = 0, r2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
      r1 += raw.x1[k] <= raw.x1[i];
      r2 += raw.x2[k] <= raw.x2[i];
    }
    p.x1.push_back(static_cast<double>(r1) / static_cast<double>(n + 1));
    p.x2.push_back(static_cast<double>(r2) / static_cast<double>(n + 1));
  }
  return p;
}

} // namespace oracle
