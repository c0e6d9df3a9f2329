#include "tailasym/margins.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "tailasym/errors.hpp"
#include "tailasym/extended_real.hpp"
#include "tailasym/special_functions.hpp"

namespace tailasym {

namespace {

void require_scale(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("margin: scale must be positive and finite");
}

void require_location(double l) {
  if (!std::isfinite(l)) throw DomainError("margin: location must be finite");
}

std::string fmt(double v) { return ExtendedReal::finite(v).to_string(); }

} // namespace

Margin Margin::normal(double mu, double sigma) {
  require_location(mu);
  require_scale(sigma);
  return {Kind::Normal, 0.0, mu, sigma};
}

Margin Margin::cauchy(double loc, double scale) {
  require_location(loc);
  require_scale(scale);
  return {Kind::Cauchy, 0.0, loc, scale};
}

Margin Margin::student_t(double nu, double loc, double scale) {
  if (!(nu > 0.0)) throw DomainError("margin: student_t degrees of freedom nu must be > 0");
  require_location(loc);
  require_scale(scale);
  return {Kind::StudentT, nu, loc, scale};
}

Margin Margin::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t.empty() || t == "none") return none();
  const auto open = t.find('(');
  std::string name = t.substr(0, open);
  std::vector<double> args;
  if (open != std::string::npos) {
    if (t.back() != ')') throw ConfigError("margin spec '" + std::string(text) + "' is missing ')'");
    const std::string inner = t.substr(open + 1, t.size() - open - 2);
    std::size_t s = 0;
    while (!inner.empty() && s <= inner.size()) {
      std::size_t e = inner.find(',', s);
      if (e == std::string::npos) e = inner.size();
      double v = 0.0;
      const auto r = std::from_chars(inner.data() + s, inner.data() + e, v);
      if (r.ec != std::errc() || r.ptr != inner.data() + e)
        throw ConfigError("margin spec '" + std::string(text) + "' has a non-numeric argument");
      args.push_back(v);
      s = e + 1;
    }
  }
  auto arg = [&](std::size_t i, double def) { return i < args.size() ? args[i] : def; };
  if (name == "normal" || name == "gaussian") {
    if (args.size() > 2) throw ConfigError("normal margin takes at most (mu, sigma)");
    return normal(arg(0, 0.0), arg(1, 1.0));
  }
  if (name == "cauchy") {
    if (args.size() > 2) throw ConfigError("cauchy margin takes at most (loc, scale)");
    return cauchy(arg(0, 0.0), arg(1, 1.0));
  }
  if (name == "student_t" || name == "t") {
    if (args.empty() || args.size() > 3) throw ConfigError("student_t margin takes (nu[, loc, scale])");
    return student_t(args[0], arg(1, 0.0), arg(2, 1.0));
  }
  throw ConfigError("unknown margin '" + name + "' (expected normal, cauchy, student_t or none)");
}

std::string Margin::spec() const {
  switch (kind) {
  case Kind::None: return "none";
  case Kind::Normal: return "normal(" + fmt(loc) + "," + fmt(scale) + ")";
  case Kind::Cauchy: return "cauchy(" + fmt(loc) + "," + fmt(scale) + ")";
  case Kind::StudentT: return "student_t(" + fmt(nu) + "," + fmt(loc) + "," + fmt(scale) + ")";
  }
  return "none";
}

double Margin::cdf(double x) const {
  const double z = (x - loc) / scale;
  switch (kind) {
  case Kind::None: return x;
  case Kind::Normal: return normal_cdf(z);
  case Kind::Cauchy:
    // atan2 keeps the far left tail accurate instead of 0.5 - 0.5 cancelling.
    return z < 0.0 ? std::atan2(1.0, -z) / std::numbers::pi : 0.5 + std::atan(z) / std::numbers::pi;
  case Kind::StudentT: return student_t_cdf(z, nu);
  }
  return x;
}

} // namespace tailasym
