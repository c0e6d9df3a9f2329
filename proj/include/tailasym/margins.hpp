#pragma once

#include <string>
#include <string_view>

namespace tailasym {

/// Known marginal distribution used to move raw data to the uniform scale.
struct Margin {
  enum class Kind { None, Normal, Cauchy, StudentT };

  Kind kind = Kind::None;
  double nu = 0.0;     // Student-t degrees of freedom
  double loc = 0.0;
  double scale = 1.0;

  static Margin none() { return {}; }
  static Margin normal(double mu, double sigma);
  static Margin cauchy(double loc, double scale);
  static Margin student_t(double nu, double loc, double scale);

  /// "normal(mu,sigma)", "cauchy(loc,scale)", "student_t(nu,loc,scale)" or "none";
  /// missing location/scale arguments default to 0 and 1.
  static Margin parse(std::string_view text);
  std::string spec() const;

  double cdf(double x) const;
};

} // namespace tailasym
