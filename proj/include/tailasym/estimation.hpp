#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tailasym/copula.hpp"
#include "tailasym/extended_real.hpp"
#include "tailasym/paired_sample.hpp"
#include "tailasym/rng.hpp"

namespace tailasym {

enum class Execution { Serial, Parallel };

/// Corner counts at one u: lower = #{U1 <= u, U2 <= u}, upper = #{U1 >= 1-u, U2 >= 1-u}.
struct TailCounts {
  double u = 0.0;
  std::size_t lower = 0;
  std::size_t upper = 0;
  std::size_t n = 0;

  double t_lower() const { return n ? static_cast<double>(lower) / static_cast<double>(n) : 0.0; }
  double t_upper() const { return n ? static_cast<double>(upper) / static_cast<double>(n) : 0.0; }
};

/// Sorted-key index over a uniform/pseudo sample answering corner counts in
/// O(log n). The predicates are evaluated literally (U <= u and U >= 1 - u,
/// with 1 - u rounded once), so counts agree exactly with a direct recount.
class TailCounter {
public:
  explicit TailCounter(const PairedSample& sample);

  std::size_t n() const { return lower_keys_.size(); }
  TailCounts counts(double u) const;

  /// Sorted, de-duplicated {min(max(u1,u2), max(1-u1,1-u2))} restricted to (0, 0.5].
  std::vector<double> jump_set() const;

private:
  std::vector<double> lower_keys_;  // max(u1, u2), sorted
  std::vector<double> upper_keys_;  // min(u1, u2), sorted
  std::vector<double> jumps_;
};

TailCounts tail_counts(const PairedSample& sample, double u);

/// log(T_U / T_L) with extended-log conventions.
ExtendedReal alpha_from_counts(const TailCounts& c);
ExtendedReal alpha_hat(const PairedSample& sample, double u);

/// sqrt((T_L + T_U) / (T_L T_U)); +inf when either count is zero.
double sigma_hat(const TailCounts& c);
double sigma_hat(const PairedSample& sample, double u);

enum class IntervalMethod { Asymptotic, Bonferroni, Bootstrap };
std::string_view interval_method_name(IntervalMethod m);

/// Point estimates with lower/upper bounds over a u-grid.
struct IntervalBand {
  std::vector<double> u;
  std::vector<ExtendedReal> estimate;
  std::vector<ExtendedReal> lower;
  std::vector<ExtendedReal> upper;
  std::vector<std::size_t> count_lower;  // corner counts behind each estimate
  std::vector<std::size_t> count_upper;
  std::vector<std::string> flags;        // per-u notes, empty when none
  IntervalMethod method = IntervalMethod::Asymptotic;
  double level = 0.9;
  std::size_t n = 0;
  std::optional<double> z;               // asymptotic / Bonferroni multiplier
  std::optional<std::size_t> resamples;  // bootstrap
  std::vector<std::size_t> nonfinite_replicates;  // bootstrap, per u

  std::size_t size() const { return u.size(); }
};

/// alpha_hat +- z_{p/2} sigma_hat / sqrt(n) at each u of `u_grid`.
IntervalBand ci_pointwise(const PairedSample& sample, std::span<const double> u_grid, double level);

/// Pointwise intervals with z_{p/(2n)} evaluated on the jump set; the band's
/// u-range is [u.front(), u.back()].
IntervalBand ci_band_bonferroni(const PairedSample& sample, double level);

/// Same multiplier z_{p/(2n)}, evaluated on a caller grid.
IntervalBand ci_bonferroni_on_grid(const PairedSample& sample, std::span<const double> u_grid,
                                   double level);

struct TestReport {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::vector<double> u_points;
  std::vector<double> alpha_hat;
  std::vector<double> alpha_null;
  double size = 0.1;
  bool reject = false;
};

/// n (a - a0)^T Sigma^-1 (a - a0) against chi-squared(m), with
/// Sigma_ij = (T_L + T_U)/(T_L T_U) evaluated at max(u_i, u_j).
/// Throws NumericalError ("singular covariance") naming the offending pair
/// when consecutive points do not increase T_L or T_U, when a count is zero,
/// or when the Cholesky factorisation fails.
TestReport chi2_test(const PairedSample& sample, std::span<const double> u_points,
                     std::span<const double> null_alpha, double size = 0.1);

/// m equally spaced points u_min + (u_max - u_min) j / (m - 1).
std::vector<double> equispaced_points(double u_min, double u_max, std::size_t m);

/// Integer ranks #{k : x_k <= x_i} for one column (ties share the maximal count).
std::vector<std::size_t> max_ranks(std::span<const double> x);

/// Pseudo-observations rank / (n + 1), on the pseudo scale.
PairedSample pseudo_observations(const PairedSample& raw);

ExtendedReal alpha_star(const PairedSample& raw, double u);

/// Bootstrap replicates of alpha_star: row b holds resample b over `u_grid`.
/// Resample b draws from stream bootstrap_stream(master, replication, b).
/// Serial and parallel execution produce identical output.
std::vector<std::vector<ExtendedReal>> bootstrap_replicates(const PairedSample& raw,
                                                            std::span<const double> u_grid,
                                                            std::size_t resamples,
                                                            std::uint64_t master_seed,
                                                            std::uint64_t replication,
                                                            Execution exec);

/// Basic-bootstrap band [2 a* - q_{1-p/2}, 2 a* - q_{p/2}] from type-1
/// (inverse empirical CDF) quantiles of the finite replicates.
IntervalBand ci_bootstrap(const PairedSample& raw, std::span<const double> u_grid, double level,
                          std::size_t resamples, std::uint64_t master_seed,
                          std::uint64_t replication = 0, Execution exec = Execution::Parallel);

/// Basic-bootstrap band from replicates already drawn by bootstrap_replicates
/// on the same sample and grid (lets several levels share one set of resamples).
IntervalBand ci_bootstrap_from_replicates(const PairedSample& raw, std::span<const double> u_grid,
                                          double level,
                                          const std::vector<std::vector<ExtendedReal>>& replicates);

/// Type-1 empirical quantile of sorted data: x_(ceil(n p)), clamped to [1, n].
double quantile_type1(std::span<const double> sorted, double p);

/// Smallest jump point at which every source has T_L and T_U counts >= threshold;
/// empty if never reached.
std::optional<double> u_min_rule(std::span<const PairedSample* const> sources,
                                 std::size_t threshold = 30);
std::optional<double> u_min_rule(const PairedSample& source, std::size_t threshold = 30);

/// Exact population moments of (T_L(u), T_U(u)) for samples of size n.
struct CountMoments {
  double mean_lower, mean_upper;
  double var_lower, var_upper;
};
CountMoments count_moments(const CopulaModel& model, double u, std::size_t n);
double cov_lower_lower(const CopulaModel& model, double u, double v, std::size_t n);
double cov_upper_upper(const CopulaModel& model, double u, double v, std::size_t n);
double cov_lower_upper(const CopulaModel& model, double u, double v, std::size_t n);

/// Limiting covariance of sqrt(n)(alpha_hat(u) - alpha(u)) and at v.
double asymptotic_covariance(const CopulaModel& model, double u, double v);

} // namespace tailasym
