#include "tailasym/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tailasym/errors.hpp"
#include "tailasym/special_functions.hpp"

namespace tailasym {

namespace {

constexpr int kMaxRootIterations = 200;
constexpr double kRootTolerance = 1e-12;

inline double open_unit(double u) {
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::clamp(u, lo, hi);
}

// Bracketed solve of h(v) = p on [0, 1] for non-decreasing h, alternating
// secant (regula falsi) steps with bisection so the bracket at least halves
// every two iterations.
double invert_monotone(const CopulaModel& model, double p, double u1) {
  double lo = 0.0, hi = 1.0;
  double flo = -p, fhi = 1.0 - p;
  for (int it = 0; it < kMaxRootIterations; ++it) {
    double x = 0.5 * (lo + hi);
    if (it % 2 == 0 && fhi > flo) {
      const double s = lo - flo * (hi - lo) / (fhi - flo);
      if (s > lo && s < hi) x = s;
    }
    const double fx = model.conditional_cdf(x, u1) - p;
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= kRootTolerance * std::max(lo, 1e-4)) return 0.5 * (lo + hi);
  }
  std::ostringstream os;
  os << "conditional inversion failed to converge for " << model.spec() << " at u1 = " << u1
     << ", quantile p = " << p;
  throw NumericalError(os.str());
}

double solve_quadratic_unit_root(double a, double b, double c) {
  if (std::abs(a) < 1e-14) return -c / b;
  const double disc = std::max(b * b - 4.0 * a * c, 0.0);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double r1 = q / a;
  const double r2 = c / q;
  const bool ok1 = r1 >= 0.0 && r1 <= 1.0;
  const bool ok2 = r2 >= 0.0 && r2 <= 1.0;
  if (ok1 && !ok2) return r1;
  if (ok2 && !ok1) return r2;
  if (ok1 && ok2) return std::min(r1, r2);
  return std::numeric_limits<double>::quiet_NaN();
}

double base_conditional_quantile(const CopulaModel& m, double p, double u1) {
  const double th = m.param(0);
  switch (m.family()) {
  case Family::Independence: return p;
  case Family::Gaussian: {
    const double z = th * normal_quantile(u1) + std::sqrt(1.0 - th * th) * normal_quantile(p);
    return normal_cdf(z);
  }
  case Family::FGM: {
    const double b = th * (1.0 - 2.0 * u1);
    if (std::abs(b) < 1e-14) return p;
    return 2.0 * p / ((1.0 + b) + std::sqrt((1.0 + b) * (1.0 + b) - 4.0 * b * p));
  }
  case Family::Frank: {
    const double g = std::expm1(-th);
    const double a = std::exp(-th * u1);
    const double x = p * g / (a * (1.0 - p) + p);
    return -std::log1p(x) / th;
  }
  case Family::Clayton: {
    if (th == -1.0) return 1.0 - u1;
    if (th < 0.0) {
      const double base = std::pow(u1, -th) * std::expm1(-th / (1.0 + th) * std::log(p)) + 1.0;
      return std::pow(base, -1.0 / th);
    }
    return invert_monotone(m, p, u1);
  }
  case Family::AMH: {
    // p (k + m v)^2 = v (1 - theta + theta v), k = 1 - theta (1 - u1), m = theta (1 - u1)
    const double mm = th * (1.0 - u1);
    const double k = 1.0 - mm;
    const double v = solve_quadratic_unit_root(p * mm * mm - th, 2.0 * p * k * mm - (1.0 - th), p * k * k);
    if (std::isfinite(v)) return v;
    return invert_monotone(m, p, u1);
  }
  case Family::Plackett:
  case Family::Gumbel:
  case Family::BB7: return invert_monotone(m, p, u1);
  }
  return p;
}

// log(1 + e^x) without overflow.
inline double log1pexp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

} // namespace

double conditional_quantile(const CopulaModel& model, double p, double u1) {
  if (!(p >= 0.0 && p <= 1.0 && u1 >= 0.0 && u1 <= 1.0))
    throw DomainError("conditional_quantile: arguments must lie in [0, 1]");
  if (!model.rotated()) return base_conditional_quantile(model, p, u1);
  // For the survival copula: P(U2 <= v | U1 = u1) = 1 - h_base(1 - v | 1 - u1).
  CopulaModel base = model.reflected();
  return 1.0 - base_conditional_quantile(base, 1.0 - p, 1.0 - u1);
}

PairedSample sample_copula(const CopulaModel& model, std::size_t n, SeedSpec seed) {
  if (n < 1) throw DomainError("sample_copula: n must be at least 1");
  Philox4x32 eng(seed);
  PairedSample s;
  s.scale = Scale::Uniform;
  s.x1.resize(n);
  s.x2.resize(n);

  const bool frailty = model.family() == Family::Clayton && model.param(0) > 0.0;
  const CopulaModel base = model.rotated() ? model.reflected() : model;
  for (std::size_t i = 0; i < n; ++i) {
    double u1, u2;
    if (frailty) {
      const double th = model.param(0);
      const double log_v = log_gamma_variate(eng, 1.0 / th);
      const double l1 = log1pexp(std::log(exponential(eng)) - log_v);
      const double l2 = log1pexp(std::log(exponential(eng)) - log_v);
      u1 = std::exp(-l1 / th);
      u2 = std::exp(-l2 / th);
    } else if (model.family() == Family::Gaussian) {
      const double rho = model.param(0);
      const double z1 = standard_normal(eng);
      const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * standard_normal(eng);
      u1 = normal_cdf(z1);
      u2 = normal_cdf(z2);
    } else {
      u1 = uniform_open(eng);
      u2 = base_conditional_quantile(base, uniform_open(eng), u1);
    }
    if (model.rotated()) {
      u1 = 1.0 - u1;
      u2 = 1.0 - u2;
    }
    s.x1[i] = open_unit(u1);
    s.x2[i] = open_unit(u2);
  }
  return s;
}

double cauchy_cdf(double x) {
  // For x < 0 the atan2 form avoids cancellation in 0.5 + atan(x)/pi.
  return x < 0.0 ? std::atan2(1.0, -x) / std::numbers::pi : 0.5 + std::atan(x) / std::numbers::pi;
}

double cauchy_quantile(double u) { return std::tan(std::numbers::pi * (u - 0.5)); }

PairedSample sample_clayton_cauchy(double theta, std::size_t n, SeedSpec seed) {
  if (!(theta > 0.0)) throw DomainError("clayton-cauchy: theta must be positive");
  PairedSample s = sample_copula(CopulaModel::clayton(theta), n, seed);
  for (std::size_t i = 0; i < n; ++i) {
    s.x1[i] = cauchy_quantile(s.x1[i]);
    s.x2[i] = cauchy_quantile(s.x2[i]);
  }
  s.scale = Scale::Raw;
  return s;
}

std::vector<std::vector<double>> sample_clayton_frailty(double theta, std::size_t d, std::size_t n,
                                                        SeedSpec seed) {
  if (!(theta > 0.0)) throw DomainError("clayton frailty: theta must be positive");
  CopulaModel::clayton(theta);  // domain check
  Philox4x32 eng(seed);
  std::vector<std::vector<double>> cols(d, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double log_v = log_gamma_variate(eng, 1.0 / theta);
    for (std::size_t j = 0; j < d; ++j) {
      const double l = log1pexp(std::log(exponential(eng)) - log_v);
      cols[j][i] = open_unit(std::exp(-l / theta));
    }
  }
  return cols;
}

} // namespace tailasym
