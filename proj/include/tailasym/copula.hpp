#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tailasym/extended_real.hpp"

namespace tailasym {

enum class Family { Independence, Gaussian, FGM, Plackett, Frank, Clayton, Gumbel, AMH, BB7 };

std::string_view family_name(Family f);

/// Tail-dependence coefficients, tail orders and tail-order parameters.
/// Fields without a catalogued closed form stay empty.
struct TailSummary {
  std::optional<double> lambda_lower;
  std::optional<double> lambda_upper;
  std::optional<double> kappa_lower;
  std::optional<double> kappa_upper;
  std::optional<double> upsilon_lower;
  std::optional<double> upsilon_upper;
};

/// A parametric bivariate copula, optionally rotated by 180 degrees (the
/// survival copula (u1, u2) -> u1 + u2 - 1 + C(1-u1, 1-u2)).
///
/// Parameter domains:
///   Gaussian rho in (-1, 1)        FGM theta in [-1, 1]
///   Plackett theta > 0, != 1       Frank theta != 0
///   Clayton theta in [-1, 1e4], != 0
///   Gumbel theta >= 1              AMH theta in [-1, 1]
///   BB7 delta > 0, theta >= 1
class CopulaModel {
public:
  static CopulaModel independence();
  static CopulaModel gaussian(double rho);
  static CopulaModel fgm(double theta);
  static CopulaModel plackett(double theta);
  static CopulaModel frank(double theta);
  static CopulaModel clayton(double theta);
  static CopulaModel gumbel(double theta);
  static CopulaModel amh(double theta);
  static CopulaModel bb7(double delta, double theta);

  /// Parse `family:key=value,...` (case-insensitive), e.g.
  /// `bb7:delta=1.94,theta=1.71`, `gaussian:rho=0.5`, `clayton:theta=2`.
  /// An optional `rotate=180` selects the survival copula.
  static CopulaModel parse(std::string_view spec);

  Family family() const { return family_; }
  bool rotated() const { return rotated_; }
  std::span<const double> params() const { return {params_.data(), param_count_}; }
  double param(std::size_t i) const { return params_[i]; }

  /// Canonical spec string; `parse(spec())` reproduces the model.
  std::string spec() const;

  /// The 180-degree rotation (survival copula) of this model.
  CopulaModel reflected() const;

  /// True when C equals its survival copula for every parameter value.
  bool radially_symmetric() const;

  double cdf(double u1, double u2) const;

  /// 1 - C(u1, u2), evaluated without cancellation where the family allows.
  double cdf_complement(double u1, double u2) const;

  /// Joint survival function 1 - u1 - u2 + C(u1, u2) = P(U1 > u1, U2 > u2).
  double survival(double u1, double u2) const;

  double diagonal(double u) const { return cdf(u, u); }

  /// P(U1 > 1-u, U2 > 1-u) = 2u - 1 + C(1-u, 1-u) for u in (0, 0.5].
  double survival_diagonal(double u) const;

  /// Conditional CDF P(U2 <= u2 | U1 = u1) = dC/du1.
  double conditional_cdf(double u2, double u1) const;

private:
  CopulaModel(Family f, std::array<double, 2> p, std::size_t count)
      : family_(f), params_(p), param_count_(count) {}

  double base_cdf(double u1, double u2) const;
  double base_complement(double u1, double u2) const;
  // 1 - C(1 - b1, 1 - b2) with the distances to the upper corner given exactly.
  double base_complement_tail(double b1, double b2) const;
  double base_conditional(double u2, double u1) const;

  Family family_;
  std::array<double, 2> params_{};
  std::size_t param_count_ = 0;
  bool rotated_ = false;
};

/// Catalogued tail coefficients (lower/upper swap under rotation).
TailSummary tail_summary(const CopulaModel& model);

/// alpha(u) = log( (2u - 1 + C(1-u,1-u)) / C(u,u) ) for u in (0, 0.5],
/// with the extended-log conventions.
ExtendedReal alpha_population(const CopulaModel& model, double u);

enum class LimitRule {
  ClosedForm,       // family-specific closed form (AMH)
  TailDependence,   // log(lambda_U / lambda_L)
  TailOrder,        // kappa comparison, then log(Upsilon_U / Upsilon_L)
  RadialSymmetry,   // C equal to its survival copula
  VanishingCorner,  // one corner probability is exactly zero near u = 0
  Unknown,
};

std::string_view limit_rule_name(LimitRule r);

struct LimitResult {
  std::optional<ExtendedReal> value;  // empty when rule == Unknown
  LimitRule rule = LimitRule::Unknown;
};

/// alpha(0) = lim_{u -> 0} alpha(u) from the catalogued tail behaviour.
LimitResult alpha_limit(const CopulaModel& model);

} // namespace tailasym
