#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tailasym/copula.hpp"
#include "tailasym/estimation.hpp"
#include "tailasym/extended_real.hpp"
#include "tailasym/paired_sample.hpp"

namespace tailasym {

enum class CurveKind { Alpha, Beta, RhoK };
std::string_view curve_kind_name(CurveKind k);

/// Measure values on a strictly increasing grid in (0, 0.5].
struct TailCurve {
  std::vector<double> u_grid;
  std::vector<ExtendedReal> values;
  CurveKind kind = CurveKind::Alpha;
  nlohmann::json meta = nlohmann::json::object();
};

/// Throws DomainError unless the grid is non-empty, strictly increasing and in (0, 0.5].
void validate_u_grid(std::span<const double> grid);

/// Grid "a:b:step" (inclusive of b up to rounding) as used on the command line.
std::vector<double> parse_u_grid(std::string_view text);

/// Weight a(x) applied to rescaled corner coordinates.
enum class WeightFunction { X, X2, X4 };
std::string_view weight_name(WeightFunction w);
WeightFunction parse_weight(std::string_view text);
double apply_weight(WeightFunction w, double x);

TailCurve alpha_curve(const CopulaModel& model, std::span<const double> u_grid);

/// (C-bar(1-u,1-u) - C(u,u)) / u^kappa, kappa >= 1.
double beta(const CopulaModel& model, double u, double kappa);
TailCurve beta_curve(const CopulaModel& model, std::span<const double> u_grid, double kappa);

enum class LimitStatus { Converged, NotConverged, DivergingUp, DivergingDown, Inapplicable };
std::string_view limit_status_name(LimitStatus s);

struct NumericLimit {
  ExtendedReal value;                  // value at the last (smallest) u
  LimitStatus status = LimitStatus::NotConverged;
  std::vector<double> u;
  std::vector<ExtendedReal> iterates;  // log(c(1-u) / c(u)) per u
  std::vector<double> c_lower;         // c(u)
  std::vector<double> c_upper;         // c(1-u)
  std::vector<double> slope_lower;     // d/du C(u,u)
  std::vector<double> slope_upper;     // d/du of the upper-corner mass at u
};

/// log(c(1-u)/c(u)) along a decreasing sequence in (0, 0.01], where c is the
/// second derivative of the diagonal, by central differences with h = u/10.
/// Converged when the last two iterates agree to `tolerance`. The ratio of
/// curvatures only identifies the limit when both corner masses have slopes
/// tending to zero; when either slope fails to shrink along the sequence
/// (e.g. under tail dependence) the status is Inapplicable.
NumericLimit alpha_zero_numeric(const CopulaModel& model, std::span<const double> u_sequence,
                                double tolerance = 1e-3);

struct Sigma3Result {
  double value = 0.0;
  std::size_t resolution = 0;
  double spacing = 0.0;
  double argmax_u1 = 0.0;
  double argmax_u2 = 0.0;
  std::optional<double> doubled_value;  // same search at 2 x resolution
};

/// max |C(u1,u2) - C_hat(u1,u2)| over the (resolution+1)^2 lattice on [0,1]^2,
/// with C_hat the survival copula.
Sigma3Result sigma3(const CopulaModel& model, std::size_t resolution = 400,
                    Execution exec = Execution::Parallel, bool check_doubling = false);

/// Same statistic for the empirical copula of a uniform/pseudo sample.
Sigma3Result sigma3_sample(const PairedSample& sample, std::size_t resolution = 400);

/// Lower-corner minus upper-corner Pearson correlation of weighted, rescaled
/// coordinates; empty when a corner has fewer than three points or no spread.
std::optional<double> rho_k(const PairedSample& sample, double u, WeightFunction weight);
TailCurve rho_k_curve(const PairedSample& sample, std::span<const double> u_grid,
                      WeightFunction weight, bool negate = false);

/// alpha_hat for every ordered pair of columns; row-major d x d.
struct AlphaMatrix {
  std::size_t d = 0;
  double u = 0.0;
  std::vector<ExtendedReal> entries;
  const ExtendedReal& at(std::size_t i, std::size_t j) const { return entries[i * d + j]; }
};
AlphaMatrix alpha_matrix(std::span<const std::vector<double>> columns, double u);

/// CSV with header `u,value,kind,param_json`.
void write_curve_csv(std::ostream& os, const TailCurve& curve, bool header = true);

/// Quote a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

} // namespace tailasym
