#include "tailasym/extended_real.hpp"

#include <charconv>
#include <cmath>

#include "tailasym/errors.hpp"

namespace tailasym {

std::string ExtendedReal::to_string() const {
  switch (kind_) {
  case Kind::PosInf: return "+inf";
  case Kind::NegInf: return "-inf";
  default: break;
  }
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, res.ptr);
}

ExtendedReal log_ratio(double num, double den) {
  const bool num_zero = !(num > 0.0);
  const bool den_zero = !(den > 0.0);
  if (num_zero && den_zero) return ExtendedReal::finite(0.0);
  if (num_zero) return ExtendedReal::neg_inf();
  if (den_zero) return ExtendedReal::pos_inf();
  // Always take the log of a ratio >= 1 so that swapping the arguments
  // negates the result exactly.
  if (num >= den) return ExtendedReal::finite(std::log(num / den));
  return ExtendedReal::finite(-std::log(den / num));
}

ExtendedReal parse_extended(const std::string& text) {
  if (text == "+inf" || text == "inf" || text == "Inf" || text == "+Inf") return ExtendedReal::pos_inf();
  if (text == "-inf" || text == "-Inf") return ExtendedReal::neg_inf();
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw DataError("not a number: '" + text + "'");
  return ExtendedReal::finite(v);
}

} // namespace tailasym
