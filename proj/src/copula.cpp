#include "tailasym/copula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "tailasym/errors.hpp"
#include "tailasym/special_functions.hpp"

namespace tailasym {

namespace {

constexpr double kClaytonThetaMax = 1e4;

std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void domain_fail(std::string_view family, std::string_view param, double value,
                              std::string_view bound) {
  std::ostringstream os;
  os << family << ": parameter " << param << " = " << fmt_double(value) << " outside domain "
     << bound;
  throw DomainError(os.str());
}

void check_unit(double u1, double u2) {
  if (!(u1 >= 0.0 && u1 <= 1.0 && u2 >= 0.0 && u2 <= 1.0))
    throw DomainError("copula arguments must lie in [0, 1]");
}

// log S for S = u1^-theta + u2^-theta - 1 (Clayton generator sum), theta > 0,
// stable for huge theta. Returns the pair (log1p argument form when usable).
struct ClaytonSum {
  bool zero = false;      // S <= 0 (theta < 0 branch): C = 0
  double log_s = 0.0;     // log S
};

ClaytonSum clayton_sum(double u1, double u2, double theta) {
  const double x1 = -theta * std::log(u1);
  const double x2 = -theta * std::log(u2);
  ClaytonSum out;
  const double xm = std::max(x1, x2);
  if (xm > 700.0) {
    // log(e^x1 + e^x2 - 1) by log-sum-exp
    out.log_s = xm + std::log(std::exp(x1 - xm) + std::exp(x2 - xm) - std::exp(-xm));
    return out;
  }
  const double a = std::expm1(x1) + std::expm1(x2);  // S - 1
  if (!(a > -1.0)) {
    out.zero = true;
    return out;
  }
  out.log_s = std::log1p(a);
  return out;
}

// BB7 pieces: A = sum_i [(1 - ubar_i^theta)^-delta - 1], w = (1 + A)^(-1/delta),
// C = 1 - (1 - w)^(1/theta). Returns log w (-inf when a margin is 0).
double bb7_log_w(double u1, double u2, double delta, double theta) {
  auto term = [&](double u) {
    if (u <= 0.0) return std::numeric_limits<double>::infinity();
    const double y = std::exp(theta * std::log1p(-u));     // ubar^theta
    return std::expm1(-delta * std::log1p(-y));            // (1 - y)^-delta - 1
  };
  const double a = term(u1) + term(u2);
  if (std::isinf(a)) return -std::numeric_limits<double>::infinity();
  return -std::log1p(a) / delta;
}

} // namespace

std::string_view family_name(Family f) {
  switch (f) {
  case Family::Independence: return "independence";
  case Family::Gaussian: return "gaussian";
  case Family::FGM: return "fgm";
  case Family::Plackett: return "plackett";
  case Family::Frank: return "frank";
  case Family::Clayton: return "clayton";
  case Family::Gumbel: return "gumbel";
  case Family::AMH: return "amh";
  case Family::BB7: return "bb7";
  }
  return "unknown";
}

CopulaModel CopulaModel::independence() { return {Family::Independence, {0.0, 0.0}, 0}; }

CopulaModel CopulaModel::gaussian(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) domain_fail("gaussian", "rho", rho, "(-1, 1)");
  return {Family::Gaussian, {rho, 0.0}, 1};
}

CopulaModel CopulaModel::fgm(double theta) {
  if (!(theta >= -1.0 && theta <= 1.0)) domain_fail("fgm", "theta", theta, "[-1, 1]");
  return {Family::FGM, {theta, 0.0}, 1};
}

CopulaModel CopulaModel::plackett(double theta) {
  if (!(theta > 0.0) || theta == 1.0 || std::isinf(theta))
    domain_fail("plackett", "theta", theta, "(0, inf) \\ {1}");
  return {Family::Plackett, {theta, 0.0}, 1};
}

CopulaModel CopulaModel::frank(double theta) {
  if (!std::isfinite(theta) || theta == 0.0) domain_fail("frank", "theta", theta, "R \\ {0}");
  return {Family::Frank, {theta, 0.0}, 1};
}

CopulaModel CopulaModel::clayton(double theta) {
  if (!(theta >= -1.0 && theta <= kClaytonThetaMax) || theta == 0.0)
    domain_fail("clayton", "theta", theta, "[-1, 1e4] \\ {0}");
  return {Family::Clayton, {theta, 0.0}, 1};
}

CopulaModel CopulaModel::gumbel(double theta) {
  if (!(theta >= 1.0) || std::isinf(theta)) domain_fail("gumbel", "theta", theta, "[1, inf)");
  return {Family::Gumbel, {theta, 0.0}, 1};
}

CopulaModel CopulaModel::amh(double theta) {
  if (!(theta >= -1.0 && theta <= 1.0)) domain_fail("amh", "theta", theta, "[-1, 1]");
  return {Family::AMH, {theta, 0.0}, 1};
}

CopulaModel CopulaModel::bb7(double delta, double theta) {
  if (!(delta > 0.0) || std::isinf(delta)) domain_fail("bb7", "delta", delta, "(0, inf)");
  if (!(theta >= 1.0) || std::isinf(theta)) domain_fail("bb7", "theta", theta, "[1, inf)");
  return {Family::BB7, {delta, theta}, 2};
}

CopulaModel CopulaModel::parse(std::string_view spec) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  const auto colon = s.find(':');
  const std::string fam = s.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream rest(s.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("model spec: expected key=value, got '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      double v = 0.0;
      auto res = std::from_chars(val.data(), val.data() + val.size(), v);
      if (res.ec != std::errc() || res.ptr != val.data() + val.size())
        throw ConfigError("model spec: bad number for '" + key + "': '" + val + "'");
      if (kv.count(key)) throw ConfigError("model spec: duplicate key '" + key + "'");
      kv[key] = v;
    }
  }
  bool rotate = false;
  if (auto it = kv.find("rotate"); it != kv.end()) {
    if (it->second == 180.0) rotate = true;
    else if (it->second != 0.0) throw ConfigError("model spec: rotate must be 0 or 180");
    kv.erase(it);
  }
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("model spec '" + fam + "': missing parameter '" + key + "'");
    const double v = it->second;
    kv.erase(it);
    return v;
  };

  CopulaModel m = independence();
  if (fam == "independence" || fam == "indep" || fam == "product") m = independence();
  else if (fam == "gaussian" || fam == "normal") m = gaussian(take("rho"));
  else if (fam == "fgm") m = fgm(take("theta"));
  else if (fam == "plackett") m = plackett(take("theta"));
  else if (fam == "frank") m = frank(take("theta"));
  else if (fam == "clayton") m = clayton(take("theta"));
  else if (fam == "gumbel") m = gumbel(take("theta"));
  else if (fam == "amh") m = amh(take("theta"));
  else if (fam == "bb7") {
    const double d = take("delta");
    m = bb7(d, take("theta"));
  } else {
    throw ConfigError("unknown copula family '" + fam + "'");
  }
  if (!kv.empty()) throw ConfigError("model spec '" + fam + "': unknown parameter '" + kv.begin()->first + "'");
  m.rotated_ = rotate;
  return m;
}

std::string CopulaModel::spec() const {
  std::string out(family_name(family_));
  std::vector<std::pair<const char*, double>> kv;
  switch (family_) {
  case Family::Independence: break;
  case Family::Gaussian: kv.push_back({"rho", params_[0]}); break;
  case Family::BB7:
    kv.push_back({"delta", params_[0]});
    kv.push_back({"theta", params_[1]});
    break;
  default: kv.push_back({"theta", params_[0]}); break;
  }
  if (rotated_) kv.push_back({"rotate", 180.0});
  for (std::size_t i = 0; i < kv.size(); ++i) {
    out += (i == 0 ? ':' : ',');
    out += kv[i].first;
    out += '=';
    out += fmt_double(kv[i].second);
  }
  return out;
}

CopulaModel CopulaModel::reflected() const {
  CopulaModel m = *this;
  m.rotated_ = !rotated_;
  return m;
}

bool CopulaModel::radially_symmetric() const {
  switch (family_) {
  case Family::Independence:
  case Family::Gaussian:
  case Family::FGM:
  case Family::Plackett:
  case Family::Frank: return true;
  case Family::Clayton: return params_[0] == -1.0;  // countermonotonic bound
  case Family::AMH: return params_[0] == 0.0;
  case Family::Gumbel: return params_[0] == 1.0;
  default: return false;
  }
}

double CopulaModel::base_cdf(double u1, double u2) const {
  if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
  if (u1 >= 1.0) return u2;
  if (u2 >= 1.0) return u1;
  const double th = params_[0];
  switch (family_) {
  case Family::Independence: return u1 * u2;
  case Family::Gaussian:
    return bivariate_normal_cdf(normal_quantile(u1), normal_quantile(u2), th);
  case Family::FGM: return u1 * u2 * (1.0 + th * (1.0 - u1) * (1.0 - u2));
  case Family::Plackett: {
    const double s = 1.0 + (th - 1.0) * (u1 + u2);
    const double r = s * s - 4.0 * th * (th - 1.0) * u1 * u2;
    // Rationalised form avoids cancellation when (th - 1) * (u1 + u2) is small.
    return 2.0 * th * u1 * u2 / (s + std::sqrt(std::max(r, 0.0)));
  }
  case Family::Frank: {
    const double num = std::expm1(-th * u1) * std::expm1(-th * u2);
    return -std::log1p(num / std::expm1(-th)) / th;
  }
  case Family::Clayton: {
    const ClaytonSum cs = clayton_sum(u1, u2, th);
    if (cs.zero) return 0.0;
    return std::exp(-cs.log_s / th);
  }
  case Family::Gumbel: {
    const double x = std::pow(-std::log(u1), th) + std::pow(-std::log(u2), th);
    return std::exp(-std::pow(x, 1.0 / th));
  }
  case Family::AMH: return u1 * u2 / (1.0 - th * (1.0 - u1) * (1.0 - u2));
  case Family::BB7: {
    const double lw = bb7_log_w(u1, u2, params_[0], params_[1]);
    return -std::expm1(std::log(-std::expm1(lw)) / params_[1]);
  }
  }
  return 0.0;
}

double CopulaModel::base_complement(double u1, double u2) const {
  if (u1 <= 0.0 || u2 <= 0.0) return 1.0;
  const double b1 = 1.0 - u1;
  const double b2 = 1.0 - u2;
  if (u1 >= 1.0) return b2;
  if (u2 >= 1.0) return b1;
  const double th = params_[0];
  switch (family_) {
  case Family::Independence: return b1 + b2 - b1 * b2;
  case Family::FGM: return b1 + b2 - b1 * b2 - th * u1 * u2 * b1 * b2;
  case Family::AMH: return (b1 + b2 - (1.0 + th) * b1 * b2) / (1.0 - th * b1 * b2);
  case Family::Clayton: {
    const ClaytonSum cs = clayton_sum(u1, u2, th);
    if (cs.zero) return 1.0;
    return -std::expm1(-cs.log_s / th);
  }
  case Family::Gumbel: {
    const double x = std::pow(-std::log(u1), th) + std::pow(-std::log(u2), th);
    return -std::expm1(-std::pow(x, 1.0 / th));
  }
  case Family::BB7: {
    // 1 - C = (1 - w)^(1/theta)
    const double lw = bb7_log_w(u1, u2, params_[0], params_[1]);
    return std::pow(-std::expm1(lw), 1.0 / params_[1]);
  }
  default: return 1.0 - base_cdf(u1, u2);
  }
}

double CopulaModel::base_complement_tail(double b1, double b2) const {
  if (b1 >= 1.0 || b2 >= 1.0) return 1.0;
  if (b1 <= 0.0) return b2;
  if (b2 <= 0.0) return b1;
  const double th = params_[0];
  switch (family_) {
  case Family::Independence: return b1 + b2 - b1 * b2;
  case Family::FGM: return b1 + b2 - b1 * b2 - th * (1.0 - b1) * (1.0 - b2) * b1 * b2;
  case Family::AMH: return (b1 + b2 - (1.0 + th) * b1 * b2) / (1.0 - th * b1 * b2);
  case Family::Clayton: {
    const double a = std::expm1(-th * std::log1p(-b1)) + std::expm1(-th * std::log1p(-b2));
    if (!(a > -1.0)) return 1.0;
    return -std::expm1(-std::log1p(a) / th);
  }
  case Family::Gumbel: {
    const double x = std::pow(-std::log1p(-b1), th) + std::pow(-std::log1p(-b2), th);
    return -std::expm1(-std::pow(x, 1.0 / th));
  }
  case Family::BB7: {
    const double delta = params_[0], theta = params_[1];
    auto term = [&](double b) { return std::expm1(-delta * std::log1p(-std::pow(b, theta))); };
    const double lw = -std::log1p(term(b1) + term(b2)) / delta;
    return std::pow(-std::expm1(lw), 1.0 / theta);
  }
  default: return 1.0 - base_cdf(1.0 - b1, 1.0 - b2);
  }
}

double CopulaModel::base_conditional(double u2, double u1) const {
  if (u2 <= 0.0) return 0.0;
  if (u2 >= 1.0) return 1.0;
  const double th = params_[0];
  // u1 at the boundary: take the one-sided limit of the formula by nudging.
  u1 = std::clamp(u1, 1e-300, std::nextafter(1.0, 0.0));
  switch (family_) {
  case Family::Independence: return u2;
  case Family::Gaussian: {
    const double z1 = normal_quantile(u1);
    const double z2 = normal_quantile(u2);
    return normal_cdf((z2 - th * z1) / std::sqrt(1.0 - th * th));
  }
  case Family::FGM: return u2 * (1.0 + th * (1.0 - u2) * (1.0 - 2.0 * u1));
  case Family::Plackett: {
    const double s = 1.0 + (th - 1.0) * (u1 + u2);
    const double r = s * s - 4.0 * th * (th - 1.0) * u1 * u2;
    return 0.5 * (1.0 - (s - 2.0 * th * u2) / std::sqrt(std::max(r, 0.0)));
  }
  case Family::Frank: {
    const double g2 = std::expm1(-th * u2);
    return std::exp(-th * u1) * g2 / (std::expm1(-th) + std::expm1(-th * u1) * g2);
  }
  case Family::Clayton: {
    const ClaytonSum cs = clayton_sum(u1, u2, th);
    if (cs.zero) return 0.0;
    return std::exp((-th - 1.0) * std::log(u1) + (-1.0 / th - 1.0) * cs.log_s);
  }
  case Family::Gumbel: {
    const double x = -std::log(u1);
    const double y = -std::log(u2);
    const double s = std::pow(x, th) + std::pow(y, th);
    const double sr = std::pow(s, 1.0 / th);
    return std::exp(-sr + (1.0 / th - 1.0) * std::log(s) + (th - 1.0) * std::log(x) - std::log(u1));
  }
  case Family::AMH: {
    const double d = 1.0 - th * (1.0 - u1) * (1.0 - u2);
    return u2 * (1.0 - th * (1.0 - u2)) / (d * d);
  }
  case Family::BB7: {
    const double delta = params_[0];
    const double theta = params_[1];
    const double lw = bb7_log_w(u1, u2, delta, theta);
    if (std::isinf(lw)) return 0.0;
    const double lb1 = std::log1p(-u1);
    const double y1 = std::exp(theta * lb1);  // ubar1^theta
    // h = (1-w)^(1/theta - 1) * ubar1^(theta-1) * (1-y1)^(-delta-1) * S^(-1/delta-1), S = w^-delta
    const double log_s = -delta * lw;
    const double log_h = (1.0 / theta - 1.0) * std::log(-std::expm1(lw)) + (theta - 1.0) * lb1 +
                         (-delta - 1.0) * std::log1p(-y1) + (-1.0 / delta - 1.0) * log_s;
    return std::exp(log_h);
  }
  }
  return 0.0;
}

double CopulaModel::cdf(double u1, double u2) const {
  check_unit(u1, u2);
  if (!rotated_) return base_cdf(u1, u2);
  const double v = u1 + u2 - base_complement_tail(u1, u2);
  return std::clamp(v, 0.0, std::min(u1, u2));
}

double CopulaModel::cdf_complement(double u1, double u2) const {
  check_unit(u1, u2);
  if (!rotated_) return base_complement(u1, u2);
  const double v = (1.0 - u1) + (1.0 - u2) - base_cdf(1.0 - u1, 1.0 - u2);
  return std::clamp(v, 0.0, 1.0);
}

double CopulaModel::survival(double u1, double u2) const {
  check_unit(u1, u2);
  return std::max(0.0, (1.0 - u1) + (1.0 - u2) - cdf_complement(u1, u2));
}

double CopulaModel::survival_diagonal(double u) const {
  if (!(u > 0.0 && u <= 0.5)) throw DomainError("survival_diagonal: u must lie in (0, 0.5]");
  if (u == 0.5) return cdf(0.5, 0.5);
  // The upper corner of a rotated model is the base model's lower corner.
  if (rotated_) return base_cdf(u, u);
  return std::max(0.0, 2.0 * u - base_complement_tail(u, u));
}

double CopulaModel::conditional_cdf(double u2, double u1) const {
  check_unit(u1, u2);
  if (!rotated_) return std::clamp(base_conditional(u2, u1), 0.0, 1.0);
  return std::clamp(1.0 - base_conditional(1.0 - u2, 1.0 - u1), 0.0, 1.0);
}

TailSummary tail_summary(const CopulaModel& model) {
  TailSummary t;
  const double th = model.param(0);
  switch (model.family()) {
  case Family::Independence:
    t = {0.0, 0.0, 2.0, 2.0, 1.0, 1.0};
    break;
  case Family::Gaussian:
  case Family::FGM:
  case Family::Plackett:
  case Family::Frank:
    t.lambda_lower = 0.0;
    t.lambda_upper = 0.0;
    break;
  case Family::Clayton:
    if (th > 0.0) {
      t.lambda_lower = std::exp2(-1.0 / th);
      t.lambda_upper = 0.0;
      t.kappa_lower = 1.0;
    } else {
      t.lambda_lower = 0.0;
      t.lambda_upper = 0.0;
    }
    break;
  case Family::Gumbel: {
    // C(u,u) = u^(2^(1/theta)) exactly.
    const double k = std::exp2(1.0 / th);
    t.lambda_lower = 0.0;
    t.lambda_upper = 2.0 - k;
    t.kappa_lower = k;
    t.upsilon_lower = 1.0;
    if (th > 1.0) t.kappa_upper = 1.0;
    else {
      t.kappa_upper = 2.0;
      t.upsilon_upper = 1.0;
    }
    break;
  }
  case Family::AMH:
    // C(u,u) = u^2 / (1 - theta (1-u)^2); upper corner ~ (1 + theta) u^2.
    if (th < 1.0) {
      t.lambda_lower = 0.0;
      t.kappa_lower = 2.0;
      t.upsilon_lower = 1.0 / (1.0 - th);
    } else {
      t.lambda_lower = 0.5;
      t.kappa_lower = 1.0;
    }
    t.lambda_upper = 0.0;
    if (th > -1.0) {
      t.kappa_upper = 2.0;
      t.upsilon_upper = 1.0 + th;
    }
    break;
  case Family::BB7: {
    const double delta = model.param(0);
    const double theta = model.param(1);
    t.lambda_lower = std::exp2(-1.0 / delta);
    t.lambda_upper = 2.0 - std::exp2(1.0 / theta);
    t.kappa_lower = 1.0;
    if (theta > 1.0) t.kappa_upper = 1.0;
    break;
  }
  }
  if (model.rotated()) {
    std::swap(t.lambda_lower, t.lambda_upper);
    std::swap(t.kappa_lower, t.kappa_upper);
    std::swap(t.upsilon_lower, t.upsilon_upper);
  }
  return t;
}

ExtendedReal alpha_population(const CopulaModel& model, double u) {
  if (!(u > 0.0 && u <= 0.5)) throw DomainError("alpha: u must lie in (0, 0.5]");
  return log_ratio(model.survival_diagonal(u), model.diagonal(u));
}

std::string_view limit_rule_name(LimitRule r) {
  switch (r) {
  case LimitRule::ClosedForm: return "closed_form";
  case LimitRule::TailDependence: return "tail_dependence";
  case LimitRule::TailOrder: return "tail_order";
  case LimitRule::RadialSymmetry: return "radial_symmetry";
  case LimitRule::VanishingCorner: return "vanishing_corner";
  case LimitRule::Unknown: return "unknown";
  }
  return "unknown";
}

LimitResult alpha_limit(const CopulaModel& model) {
  const double sign = model.rotated() ? -1.0 : 1.0;
  auto oriented = [&](ExtendedReal v) { return sign < 0 ? -v : v; };

  if (model.family() == Family::AMH) {
    const double th = model.param(0);
    const double r = 1.0 - th * th;
    const ExtendedReal v = r > 0.0 ? ExtendedReal::finite(std::log(r)) : ExtendedReal::neg_inf();
    return {oriented(v), LimitRule::ClosedForm};
  }
  if (model.radially_symmetric()) return {ExtendedReal::finite(0.0), LimitRule::RadialSymmetry};

  const TailSummary t = tail_summary(model);
  if (t.lambda_lower && t.lambda_upper && (*t.lambda_lower > 0.0 || *t.lambda_upper > 0.0))
    return {log_ratio(*t.lambda_upper, *t.lambda_lower), LimitRule::TailDependence};

  if (t.kappa_lower && t.kappa_upper) {
    if (*t.kappa_lower < *t.kappa_upper) return {ExtendedReal::neg_inf(), LimitRule::TailOrder};
    if (*t.kappa_lower > *t.kappa_upper) return {ExtendedReal::pos_inf(), LimitRule::TailOrder};
    if (t.upsilon_lower && t.upsilon_upper && (*t.upsilon_lower != 0.0 || *t.upsilon_upper != 0.0))
      return {log_ratio(*t.upsilon_upper, *t.upsilon_lower), LimitRule::TailOrder};
  }

  // Clayton theta in (-1, 0): C(u,u) = 0 for u <= 2^(1/theta) while the upper
  // corner keeps positive mass.
  if (model.family() == Family::Clayton && model.param(0) < 0.0)
    return {oriented(ExtendedReal::pos_inf()), LimitRule::VanishingCorner};

  return {std::nullopt, LimitRule::Unknown};
}

} // namespace tailasym
