#include "tailasym/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "tailasym/errors.hpp"
#include "tailasym/special_functions.hpp"

namespace tailasym {

namespace {

void require_copula_scale(const PairedSample& s, const char* who) {
  if (s.scale == Scale::Raw)
    throw DataError(std::string(who) + ": sample must be on the uniform or pseudo scale");
  if (s.x1.size() != s.x2.size()) throw DataError(std::string(who) + ": column lengths differ");
}

void require_u(double u, const char* who) {
  if (!(u > 0.0 && u <= 0.5)) {
    std::ostringstream os;
    os << who << ": u = " << u << " outside (0, 0.5]";
    throw DomainError(os.str());
  }
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
}

ExtendedReal plus(ExtendedReal a, double b) {
  if (!a.is_finite()) return a;
  return ExtendedReal::from_double(a.value() + b);
}

IntervalBand symmetric_band(const TailCounter& counter, std::span<const double> grid, double z,
                            IntervalMethod method, double level) {
  IntervalBand band;
  band.method = method;
  band.level = level;
  band.n = counter.n();
  band.z = z;
  const double root_n = std::sqrt(static_cast<double>(counter.n()));
  for (double u : grid) {
    require_u(u, "interval");
    const TailCounts c = counter.counts(u);
    const ExtendedReal a = alpha_from_counts(c);
    const double s = sigma_hat(c);
    band.u.push_back(u);
    band.estimate.push_back(a);
    band.count_lower.push_back(c.lower);
    band.count_upper.push_back(c.upper);
    if (std::isinf(s)) {
      band.lower.push_back(ExtendedReal::neg_inf());
      band.upper.push_back(ExtendedReal::pos_inf());
      band.flags.emplace_back("unbounded");
    } else {
      const double half = z * s / root_n;
      band.lower.push_back(plus(a, -half));
      band.upper.push_back(plus(a, half));
      band.flags.emplace_back();
    }
  }
  return band;
}

} // namespace

// ---------------------------------------------------------------------------

TailCounter::TailCounter(const PairedSample& sample) {
  require_copula_scale(sample, "tail counts");
  const std::size_t n = sample.size();
  lower_keys_.resize(n);
  upper_keys_.resize(n);
  jumps_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = sample.x1[i];
    const double b = sample.x2[i];
    lower_keys_[i] = std::max(a, b);
    upper_keys_[i] = std::min(a, b);
    const double j = std::min(std::max(a, b), std::max(1.0 - a, 1.0 - b));
    if (j > 0.0 && j <= 0.5) jumps_.push_back(j);
  }
  std::sort(lower_keys_.begin(), lower_keys_.end());
  std::sort(upper_keys_.begin(), upper_keys_.end());
  std::sort(jumps_.begin(), jumps_.end());
  jumps_.erase(std::unique(jumps_.begin(), jumps_.end()), jumps_.end());
}

TailCounts TailCounter::counts(double u) const {
  const double thr = 1.0 - u;
  TailCounts c;
  c.u = u;
  c.n = n();
  c.lower = static_cast<std::size_t>(std::upper_bound(lower_keys_.begin(), lower_keys_.end(), u) -
                                     lower_keys_.begin());
  c.upper = static_cast<std::size_t>(upper_keys_.end() -
                                     std::lower_bound(upper_keys_.begin(), upper_keys_.end(), thr));
  return c;
}

std::vector<double> TailCounter::jump_set() const { return jumps_; }

TailCounts tail_counts(const PairedSample& sample, double u) {
  require_copula_scale(sample, "tail_counts");
  require_u(u, "tail_counts");
  const double thr = 1.0 - u;
  TailCounts c;
  c.u = u;
  c.n = sample.size();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample.x1[i] <= u && sample.x2[i] <= u) ++c.lower;
    if (sample.x1[i] >= thr && sample.x2[i] >= thr) ++c.upper;
  }
  return c;
}

ExtendedReal alpha_from_counts(const TailCounts& c) {
  return log_ratio(c.t_upper(), c.t_lower());
}

ExtendedReal alpha_hat(const PairedSample& sample, double u) {
  return alpha_from_counts(tail_counts(sample, u));
}

double sigma_hat(const TailCounts& c) {
  if (c.lower == 0 || c.upper == 0) return std::numeric_limits<double>::infinity();
  const double tl = c.t_lower();
  const double tu = c.t_upper();
  return std::sqrt((tl + tu) / (tl * tu));
}

double sigma_hat(const PairedSample& sample, double u) { return sigma_hat(tail_counts(sample, u)); }

std::string_view interval_method_name(IntervalMethod m) {
  switch (m) {
  case IntervalMethod::Asymptotic: return "asymptotic";
  case IntervalMethod::Bonferroni: return "bonferroni";
  case IntervalMethod::Bootstrap: return "bootstrap";
  }
  return "asymptotic";
}

IntervalBand ci_pointwise(const PairedSample& sample, std::span<const double> u_grid, double level) {
  require_level(level);
  const TailCounter counter(sample);
  const double z = normal_upper_critical(0.5 * (1.0 - level));
  return symmetric_band(counter, u_grid, z, IntervalMethod::Asymptotic, level);
}

IntervalBand ci_bonferroni_on_grid(const PairedSample& sample, std::span<const double> u_grid,
                                   double level) {
  require_level(level);
  if (sample.empty()) throw DataError("Bonferroni band: empty sample");
  const TailCounter counter(sample);
  const double p = 1.0 - level;
  const double z = normal_upper_critical(p / (2.0 * static_cast<double>(sample.size())));
  return symmetric_band(counter, u_grid, z, IntervalMethod::Bonferroni, level);
}

IntervalBand ci_band_bonferroni(const PairedSample& sample, double level) {
  require_level(level);
  if (sample.empty()) throw DataError("Bonferroni band: empty sample");
  const TailCounter counter(sample);
  const std::vector<double> jumps = counter.jump_set();
  const double p = 1.0 - level;
  const double z = normal_upper_critical(p / (2.0 * static_cast<double>(sample.size())));
  return symmetric_band(counter, jumps, z, IntervalMethod::Bonferroni, level);
}

// ---------------------------------------------------------------------------

std::vector<double> equispaced_points(double u_min, double u_max, std::size_t m) {
  if (m == 0) throw DomainError("equispaced_points: m must be positive");
  if (m == 1) return {u_min};
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j)
    out[j] = u_min + (u_max - u_min) * static_cast<double>(j) / static_cast<double>(m - 1);
  out.back() = u_max;
  return out;
}

TestReport chi2_test(const PairedSample& sample, std::span<const double> u_points,
                     std::span<const double> null_alpha, double size) {
  const std::size_t m = u_points.size();
  if (m == 0) throw DomainError("chi2_test: at least one u point required");
  if (null_alpha.size() != m) throw DomainError("chi2_test: null curve length differs from u points");
  if (!(size > 0.0 && size < 1.0)) throw DomainError("chi2_test: size must lie in (0, 1)");
  for (std::size_t i = 0; i < m; ++i) {
    require_u(u_points[i], "chi2_test");
    if (i > 0 && !(u_points[i] > u_points[i - 1]))
      throw DomainError("chi2_test: u points must be strictly increasing");
  }
  const TailCounter counter(sample);
  std::vector<TailCounts> counts(m);
  for (std::size_t i = 0; i < m; ++i) {
    counts[i] = counter.counts(u_points[i]);
    if (counts[i].lower == 0 || counts[i].upper == 0) {
      std::ostringstream os;
      os << "singular covariance: empty corner at u = " << u_points[i];
      throw NumericalError(os.str());
    }
    if (i > 0 && !(counts[i - 1].upper < counts[i].upper || counts[i - 1].lower < counts[i].lower)) {
      std::ostringstream os;
      os << "singular covariance: neither T_L nor T_U increases between u = " << u_points[i - 1]
         << " and u = " << u_points[i];
      throw NumericalError(os.str());
    }
  }
  const double n = static_cast<double>(sample.size());
  Eigen::MatrixXd sigma(m, m);
  Eigen::VectorXd a(m);
  TestReport rep;
  rep.dof = m;
  rep.size = size;
  rep.u_points.assign(u_points.begin(), u_points.end());
  for (std::size_t i = 0; i < m; ++i) {
    const TailCounts& c = counts[i];
    const double s = (c.t_lower() + c.t_upper()) / (c.t_lower() * c.t_upper());
    for (std::size_t k = 0; k <= i; ++k) {
      sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = s;
      sigma(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = s;
    }
    const double ah = alpha_from_counts(c).value();
    rep.alpha_hat.push_back(ah);
    rep.alpha_null.push_back(null_alpha[i]);
    a(static_cast<Eigen::Index>(i)) = std::sqrt(n) * (ah - null_alpha[i]);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("singular covariance: Cholesky factorisation failed");
  const Eigen::VectorXd w = llt.matrixL().solve(a);
  rep.statistic = w.squaredNorm();
  rep.p_value = chi2_upper_tail(rep.statistic, static_cast<double>(m));
  rep.reject = rep.p_value < size;
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> max_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<std::size_t> rank(n);
  std::size_t s = 0;
  while (s < n) {
    std::size_t e = s + 1;
    while (e < n && x[order[e]] == x[order[s]]) ++e;
    for (std::size_t k = s; k < e; ++k) rank[order[k]] = e;
    s = e;
  }
  return rank;
}

PairedSample pseudo_observations(const PairedSample& raw) {
  if (raw.x1.size() != raw.x2.size()) throw DataError("pseudo_observations: column lengths differ");
  if (raw.empty()) throw DataError("pseudo_observations: empty sample");
  const double denom = static_cast<double>(raw.size() + 1);
  PairedSample out;
  out.scale = Scale::Pseudo;
  for (const auto* col : {&raw.x1, &raw.x2}) {
    const std::vector<std::size_t> r = max_ranks(*col);
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = static_cast<double>(r[i]) / denom;
    (col == &raw.x1 ? out.x1 : out.x2) = std::move(v);
  }
  return out;
}

ExtendedReal alpha_star(const PairedSample& raw, double u) {
  return alpha_hat(pseudo_observations(raw), u);
}

namespace {

// Per-sample data shared by every resample: sort order and tie groups per
// coordinate, plus the integer rank thresholds equivalent to the pseudo-scale
// predicates at each grid point.
struct BootstrapPlan {
  std::size_t n = 0;
  std::array<std::vector<std::size_t>, 2> order;
  std::array<std::vector<std::size_t>, 2> group_end;  // per sorted position
  std::vector<std::size_t> lower_rank;  // max{k : k/(n+1) <= u}
  std::vector<std::size_t> upper_rank;  // min{k : k/(n+1) >= 1-u}, n+1 if none
};

BootstrapPlan make_plan(const PairedSample& raw, std::span<const double> grid) {
  BootstrapPlan plan;
  const std::size_t n = raw.size();
  plan.n = n;
  for (int j = 0; j < 2; ++j) {
    const std::vector<double>& x = j == 0 ? raw.x1 : raw.x2;
    auto& ord = plan.order[static_cast<std::size_t>(j)];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    auto& ge = plan.group_end[static_cast<std::size_t>(j)];
    ge.resize(n);
    std::size_t s = 0;
    while (s < n) {
      std::size_t e = s + 1;
      while (e < n && x[ord[e]] == x[ord[s]]) ++e;
      for (std::size_t k = s; k < e; ++k) ge[k] = e;
      s = e;
    }
  }
  const double denom = static_cast<double>(n + 1);
  auto frac = [&](std::size_t k) { return static_cast<double>(k) / denom; };
  for (double u : grid) {
    require_u(u, "bootstrap");
    std::size_t k = static_cast<std::size_t>(std::min(std::floor(u * denom), static_cast<double>(n)));
    while (k + 1 <= n && frac(k + 1) <= u) ++k;
    while (k >= 1 && frac(k) > u) --k;
    plan.lower_rank.push_back(k);
    const double thr = 1.0 - u;
    std::size_t m = static_cast<std::size_t>(std::max(std::ceil(thr * denom), 0.0));
    m = std::min(m, n + 1);
    while (m >= 1 && frac(m - 1) >= thr) --m;
    while (m <= n && frac(m) < thr) ++m;
    plan.upper_rank.push_back(m);
  }
  return plan;
}

struct BootstrapBuffers {
  std::vector<std::uint32_t> mult;
  std::array<std::vector<std::size_t>, 2> rank;
  std::vector<std::size_t> hist_lower;
  std::vector<std::size_t> hist_upper;

  explicit BootstrapBuffers(std::size_t n)
      : mult(n), rank{std::vector<std::size_t>(n), std::vector<std::size_t>(n)},
        hist_lower(n + 2), hist_upper(n + 2) {}
};

void bootstrap_one(const BootstrapPlan& plan, SeedSpec seed, BootstrapBuffers& buf,
                   std::span<ExtendedReal> out) {
  const std::size_t n = plan.n;
  std::fill(buf.mult.begin(), buf.mult.end(), 0u);
  Philox4x32 eng(seed);
  for (std::size_t i = 0; i < n; ++i) ++buf.mult[uniform_index(eng, n)];

  // Rank of observation i within the resample = total multiplicity of
  // observations whose value does not exceed x_i.
  for (std::size_t j = 0; j < 2; ++j) {
    const auto& ord = plan.order[j];
    const auto& ge = plan.group_end[j];
    auto& rank = buf.rank[j];
    std::size_t cum = 0;
    std::size_t s = 0;
    while (s < n) {
      const std::size_t e = ge[s];
      for (std::size_t k = s; k < e; ++k) cum += buf.mult[ord[k]];
      for (std::size_t k = s; k < e; ++k) rank[ord[k]] = cum;
      s = e;
    }
  }
  std::fill(buf.hist_lower.begin(), buf.hist_lower.end(), 0u);
  std::fill(buf.hist_upper.begin(), buf.hist_upper.end(), 0u);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = buf.mult[i];
    if (c == 0) continue;
    const std::size_t r1 = buf.rank[0][i];
    const std::size_t r2 = buf.rank[1][i];
    buf.hist_lower[std::max(r1, r2)] += c;
    buf.hist_upper[std::min(r1, r2)] += c;
  }
  for (std::size_t k = 1; k <= n + 1; ++k) buf.hist_lower[k] += buf.hist_lower[k - 1];
  for (std::size_t k = n + 1; k-- > 0;) buf.hist_upper[k] += buf.hist_upper[k + 1];
  for (std::size_t g = 0; g < out.size(); ++g) {
    TailCounts c;
    c.n = n;
    c.lower = buf.hist_lower[plan.lower_rank[g]];
    c.upper = plan.upper_rank[g] <= n ? buf.hist_upper[plan.upper_rank[g]] : 0;
    out[g] = alpha_from_counts(c);
  }
}

} // namespace

std::vector<std::vector<ExtendedReal>> bootstrap_replicates(const PairedSample& raw,
                                                            std::span<const double> u_grid,
                                                            std::size_t resamples,
                                                            std::uint64_t master_seed,
                                                            std::uint64_t replication,
                                                            Execution exec) {
  if (raw.scale != Scale::Raw) throw DataError("bootstrap: sample must be on the raw scale");
  if (raw.empty()) throw DataError("bootstrap: empty sample");
  if (resamples < 1) throw DomainError("bootstrap: resamples must be at least 1");
  const BootstrapPlan plan = make_plan(raw, u_grid);
  std::vector<std::vector<ExtendedReal>> reps(resamples, std::vector<ExtendedReal>(u_grid.size()));
  const auto count = static_cast<std::ptrdiff_t>(resamples);

  if (exec == Execution::Serial) {
    BootstrapBuffers buf(plan.n);
    for (std::ptrdiff_t b = 0; b < count; ++b)
      bootstrap_one(plan, bootstrap_stream(master_seed, replication, static_cast<std::uint64_t>(b)), buf,
                    reps[static_cast<std::size_t>(b)]);
    return reps;
  }
#pragma omp parallel
  {
    BootstrapBuffers buf(plan.n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < count; ++b)
      bootstrap_one(plan, bootstrap_stream(master_seed, replication, static_cast<std::uint64_t>(b)), buf,
                    reps[static_cast<std::size_t>(b)]);
  }
  return reps;
}

double quantile_type1(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of empty data");
  const double n = static_cast<double>(sorted.size());
  auto k = static_cast<std::size_t>(std::ceil(n * p));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

IntervalBand ci_bootstrap(const PairedSample& raw, std::span<const double> u_grid, double level,
                          std::size_t resamples, std::uint64_t master_seed, std::uint64_t replication,
                          Execution exec) {
  require_level(level);
  const auto reps = bootstrap_replicates(raw, u_grid, resamples, master_seed, replication, exec);
  return ci_bootstrap_from_replicates(raw, u_grid, level, reps);
}

IntervalBand ci_bootstrap_from_replicates(const PairedSample& raw, std::span<const double> u_grid,
                                          double level,
                                          const std::vector<std::vector<ExtendedReal>>& reps) {
  require_level(level);
  if (reps.empty()) throw DomainError("bootstrap: no replicates");
  const std::size_t resamples = reps.size();
  const PairedSample pseudo = pseudo_observations(raw);
  const TailCounter counter(pseudo);
  const double p = 1.0 - level;

  IntervalBand band;
  band.method = IntervalMethod::Bootstrap;
  band.level = level;
  band.n = raw.size();
  band.resamples = resamples;
  std::vector<double> finite;
  finite.reserve(resamples);
  for (std::size_t g = 0; g < u_grid.size(); ++g) {
    const TailCounts c = counter.counts(u_grid[g]);
    const ExtendedReal a = alpha_from_counts(c);
    band.u.push_back(u_grid[g]);
    band.estimate.push_back(a);
    band.count_lower.push_back(c.lower);
    band.count_upper.push_back(c.upper);
    finite.clear();
    for (const auto& row : reps)
      if (row[g].is_finite()) finite.push_back(row[g].value());
    band.nonfinite_replicates.push_back(resamples - finite.size());
    std::string flag;
    if (finite.empty()) {
      band.lower.push_back(ExtendedReal::neg_inf());
      band.upper.push_back(ExtendedReal::pos_inf());
      flag = "all_replicates_nonfinite";
    } else if (!a.is_finite()) {
      band.lower.push_back(a);
      band.upper.push_back(a);
      flag = "estimate_nonfinite";
    } else {
      std::sort(finite.begin(), finite.end());
      const double q_lo = quantile_type1(finite, 0.5 * p);
      const double q_hi = quantile_type1(finite, 1.0 - 0.5 * p);
      band.lower.push_back(ExtendedReal::finite(2.0 * a.value() - q_hi));
      band.upper.push_back(ExtendedReal::finite(2.0 * a.value() - q_lo));
    }
    if (band.nonfinite_replicates.back() > 0 && flag.empty())
      flag = "nonfinite_replicates=" + std::to_string(band.nonfinite_replicates.back());
    band.flags.push_back(flag);
  }
  return band;
}

// ---------------------------------------------------------------------------

std::optional<double> u_min_rule(std::span<const PairedSample* const> sources, std::size_t threshold) {
  if (threshold < 1) throw DomainError("u_min_rule: threshold must be at least 1");
  std::vector<TailCounter> counters;
  std::vector<double> candidates;
  for (const PairedSample* s : sources) {
    counters.emplace_back(*s);
    if (threshold > s->size()) return std::nullopt;
    const auto j = counters.back().jump_set();
    candidates.insert(candidates.end(), j.begin(), j.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (double u : candidates) {
    bool ok = true;
    for (const TailCounter& c : counters) {
      const TailCounts t = c.counts(u);
      if (t.lower < threshold || t.upper < threshold) {
        ok = false;
        break;
      }
    }
    if (ok) return u;
  }
  return std::nullopt;
}

std::optional<double> u_min_rule(const PairedSample& source, std::size_t threshold) {
  const PairedSample* p = &source;
  return u_min_rule(std::span<const PairedSample* const>(&p, 1), threshold);
}

// ---------------------------------------------------------------------------

CountMoments count_moments(const CopulaModel& model, double u, std::size_t n) {
  const double cl = model.diagonal(u);
  const double cu = model.survival_diagonal(u);
  const double nn = static_cast<double>(n);
  return {cl, cu, cl * (1.0 - cl) / nn, cu * (1.0 - cu) / nn};
}

double cov_lower_lower(const CopulaModel& model, double u, double v, std::size_t n) {
  return model.diagonal(std::min(u, v)) * (1.0 - model.diagonal(std::max(u, v))) / static_cast<double>(n);
}

double cov_upper_upper(const CopulaModel& model, double u, double v, std::size_t n) {
  // Corner [1-w, 1]^2 grows with w: the smaller corner is at min(u, v).
  return model.survival_diagonal(std::min(u, v)) * (1.0 - model.survival_diagonal(std::max(u, v))) /
         static_cast<double>(n);
}

double cov_lower_upper(const CopulaModel& model, double u, double v, std::size_t n) {
  // Disjoint corners: E[T_L(u) T_U(v)] = 0 up to the single point (0.5, 0.5).
  return -model.diagonal(u) * model.survival_diagonal(v) / static_cast<double>(n);
}

double asymptotic_covariance(const CopulaModel& model, double u, double v) {
  const double w = std::max(u, v);
  const double cl = model.diagonal(w);
  const double cu = model.survival_diagonal(w);
  return (cl + cu) / (cl * cu);
}

} // namespace tailasym
