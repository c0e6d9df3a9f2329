#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace tailasym {

/// A real number extended with +inf and -inf, kept as an explicit tag so that
/// the 0/0 -> 0 convention of the tail-asymmetry log-ratio never depends on
/// IEEE NaN/inf propagation.
class ExtendedReal {
public:
  enum class Kind { Finite, PosInf, NegInf };

  constexpr ExtendedReal() = default;

  static constexpr ExtendedReal finite(double v) { return ExtendedReal(Kind::Finite, v); }
  static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::PosInf, 0.0); }
  static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::NegInf, 0.0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }

  // Finite value; 0 for the infinite kinds.
  constexpr double value() const { return value_; }

  // IEEE view for arithmetic consumers (plots, sums of finite parts).
  double to_double() const {
    switch (kind_) {
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    case Kind::NegInf: return -std::numeric_limits<double>::infinity();
    default: return value_;
    }
  }

  static ExtendedReal from_double(double v) {
    if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
    return finite(v);
  }

  constexpr ExtendedReal operator-() const {
    switch (kind_) {
    case Kind::PosInf: return neg_inf();
    case Kind::NegInf: return pos_inf();
    default: return finite(-value_);
    }
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }

  friend constexpr bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.kind_ == b.kind_) return a.kind_ == Kind::Finite && a.value_ < b.value_;
    return a.kind_ == Kind::NegInf || b.kind_ == Kind::PosInf;
  }
  friend constexpr bool operator<=(const ExtendedReal& a, const ExtendedReal& b) {
    return a < b || a == b;
  }

  // "+inf", "-inf", or shortest round-trip decimal.
  std::string to_string() const;

private:
  constexpr ExtendedReal(Kind k, double v) : kind_(k), value_(v) {}

  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

/// log(num/den) with the conventions
///   num = 0, den > 0 -> -inf;  num > 0, den = 0 -> +inf;  num = den = 0 -> 0.
/// Negative inputs (round-off below a zero probability) are treated as 0.
ExtendedReal log_ratio(double num, double den);

/// Parse "+inf", "inf", "-inf" or a decimal.
ExtendedReal parse_extended(const std::string& text);

} // namespace tailasym
