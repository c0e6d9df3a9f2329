#include "tailasym/tail_measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "tailasym/errors.hpp"

namespace tailasym {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double parse_number(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ConfigError("cannot parse " + std::string(what) + " '" + t + "'");
  return v;
}

} // namespace

std::string_view curve_kind_name(CurveKind k) {
  switch (k) {
  case CurveKind::Alpha: return "alpha";
  case CurveKind::Beta: return "beta";
  case CurveKind::RhoK: return "rho_k";
  }
  return "alpha";
}

void validate_u_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("u grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 0.5)) {
      std::ostringstream os;
      os << "u grid value " << grid[i] << " outside (0, 0.5]";
      throw DomainError(os.str());
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("u grid must be strictly increasing");
  }
}

std::vector<double> parse_u_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  std::vector<double> grid;
  if (parts.size() == 1) {
    // Comma-separated explicit list.
    std::size_t s = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == ',') {
        grid.push_back(parse_number(text.substr(s, i - s), "u value"));
        s = i + 1;
      }
    }
  } else if (parts.size() == 3) {
    const double a = parse_number(parts[0], "grid start");
    const double b = parse_number(parts[1], "grid end");
    const double step = parse_number(parts[2], "grid step");
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    if (!(b >= a)) throw ConfigError("grid end must not precede its start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 10'000'000) throw ConfigError("grid has too many points");
    for (std::size_t k = 0; k < count; ++k) grid.push_back(std::min(a + static_cast<double>(k) * step, b));
    if (b - grid.back() > 1e-9 * step) grid.push_back(b);
  } else {
    throw ConfigError("u grid must be 'a:b:step' or a comma-separated list");
  }
  validate_u_grid(grid);
  return grid;
}

std::string_view weight_name(WeightFunction w) {
  switch (w) {
  case WeightFunction::X: return "x";
  case WeightFunction::X2: return "x2";
  case WeightFunction::X4: return "x4";
  }
  return "x";
}

WeightFunction parse_weight(std::string_view text) {
  const std::string t = trim(text);
  if (t == "x") return WeightFunction::X;
  if (t == "x2" || t == "x^2") return WeightFunction::X2;
  if (t == "x4" || t == "x^4") return WeightFunction::X4;
  throw ConfigError("unknown weight function '" + t + "' (expected x, x2 or x4)");
}

double apply_weight(WeightFunction w, double x) {
  switch (w) {
  case WeightFunction::X: return x;
  case WeightFunction::X2: return x * x;
  case WeightFunction::X4: {
    const double x2 = x * x;
    return x2 * x2;
  }
  }
  return x;
}

TailCurve alpha_curve(const CopulaModel& model, std::span<const double> u_grid) {
  validate_u_grid(u_grid);
  TailCurve curve;
  curve.kind = CurveKind::Alpha;
  curve.u_grid.assign(u_grid.begin(), u_grid.end());
  curve.values.resize(u_grid.size());
  curve.meta = {{"model", model.spec()}, {"source", "population"}};
  const auto count = static_cast<std::ptrdiff_t>(u_grid.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    curve.values[static_cast<std::size_t>(i)] = alpha_population(model, u_grid[static_cast<std::size_t>(i)]);
  return curve;
}

double beta(const CopulaModel& model, double u, double kappa) {
  if (!(kappa >= 1.0)) throw DomainError("beta: kappa must be at least 1");
  if (!(u > 0.0 && u <= 0.5)) throw DomainError("beta: u outside (0, 0.5]");
  return (model.survival_diagonal(u) - model.diagonal(u)) / std::pow(u, kappa);
}

TailCurve beta_curve(const CopulaModel& model, std::span<const double> u_grid, double kappa) {
  validate_u_grid(u_grid);
  if (!(kappa >= 1.0)) throw DomainError("beta: kappa must be at least 1");
  TailCurve curve;
  curve.kind = CurveKind::Beta;
  curve.u_grid.assign(u_grid.begin(), u_grid.end());
  curve.meta = {{"model", model.spec()}, {"kappa", kappa}, {"source", "population"}};
  for (double u : u_grid) curve.values.push_back(ExtendedReal::finite(beta(model, u, kappa)));
  return curve;
}

std::string_view limit_status_name(LimitStatus s) {
  switch (s) {
  case LimitStatus::Converged: return "converged";
  case LimitStatus::NotConverged: return "not_converged";
  case LimitStatus::DivergingUp: return "diverging_up";
  case LimitStatus::DivergingDown: return "diverging_down";
  case LimitStatus::Inapplicable: return "inapplicable";
  }
  return "not_converged";
}

NumericLimit alpha_zero_numeric(const CopulaModel& model, std::span<const double> u_sequence,
                                double tolerance) {
  if (u_sequence.empty()) throw DomainError("alpha_zero_numeric: empty u sequence");
  for (std::size_t i = 0; i < u_sequence.size(); ++i) {
    const double u = u_sequence[i];
    if (!(u > 0.0 && u <= 0.01)) throw DomainError("alpha_zero_numeric: u values must lie in (0, 0.01]");
    if (i > 0 && !(u < u_sequence[i - 1]))
      throw DomainError("alpha_zero_numeric: u sequence must be strictly decreasing");
  }
  NumericLimit out;
  for (double u : u_sequence) {
    const double h = u / 10.0;
    // Near the upper corner the diagonal is 2t - 1 + (upper corner mass), so
    // its curvature at 1 - u equals that of survival_diagonal at u, which is
    // evaluated without cancellation.
    const double cl = (model.diagonal(u + h) - 2.0 * model.diagonal(u) + model.diagonal(u - h)) / (h * h);
    const double cu = (model.survival_diagonal(u + h) - 2.0 * model.survival_diagonal(u) +
                       model.survival_diagonal(u - h)) /
                      (h * h);
    out.slope_lower.push_back((model.diagonal(u + h) - model.diagonal(u - h)) / (2.0 * h));
    out.slope_upper.push_back((model.survival_diagonal(u + h) - model.survival_diagonal(u - h)) / (2.0 * h));
    out.u.push_back(u);
    out.c_lower.push_back(cl);
    out.c_upper.push_back(cu);
    out.iterates.push_back(log_ratio(cu, cl));
  }
  out.value = out.iterates.back();
  // A slope that has not at least halved between the first and last u is
  // taken as not vanishing at the corner.
  auto vanishing = [](const std::vector<double>& d) {
    if (d.size() < 2) return true;
    return std::abs(d.back()) <= 0.5 * std::abs(d.front()) || std::abs(d.back()) < 1e-12;
  };
  if (!vanishing(out.slope_lower) || !vanishing(out.slope_upper)) {
    out.status = LimitStatus::Inapplicable;
  } else if (out.value.kind() == ExtendedReal::Kind::PosInf) {
    out.status = LimitStatus::DivergingUp;
  } else if (out.value.kind() == ExtendedReal::Kind::NegInf) {
    out.status = LimitStatus::DivergingDown;
  } else if (out.iterates.size() >= 2) {
    const ExtendedReal& prev = out.iterates[out.iterates.size() - 2];
    out.status = prev.is_finite() && std::abs(prev.value() - out.value.value()) <= tolerance
                     ? LimitStatus::Converged
                     : LimitStatus::NotConverged;
  } else {
    out.status = LimitStatus::NotConverged;
  }
  return out;
}

namespace {

struct LatticeMax {
  double value = -1.0;
  std::size_t i = 0, j = 0;
};

// Ties resolve to the lexicographically smallest (i, j) so serial and
// parallel searches agree on the reported location.
void merge(LatticeMax& a, const LatticeMax& b) {
  if (b.value > a.value || (b.value == a.value && (b.i < a.i || (b.i == a.i && b.j < a.j)))) a = b;
}

LatticeMax lattice_row(const CopulaModel& model, std::size_t i, std::size_t r) {
  LatticeMax best;
  const double denom = static_cast<double>(r);
  const double u1 = static_cast<double>(i) / denom;
  for (std::size_t j = 0; j <= r; ++j) {
    const double u2 = static_cast<double>(j) / denom;
    const double d = std::abs(model.cdf(u1, u2) - model.survival(1.0 - u1, 1.0 - u2));
    if (d > best.value) best = {d, i, j};
  }
  return best;
}

LatticeMax lattice_search(const CopulaModel& model, std::size_t r, Execution exec) {
  LatticeMax best;
  const auto rows = static_cast<std::ptrdiff_t>(r + 1);
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < rows; ++i) merge(best, lattice_row(model, static_cast<std::size_t>(i), r));
    return best;
  }
#pragma omp parallel
  {
    LatticeMax local;
#pragma omp for schedule(dynamic, 4) nowait
    for (std::ptrdiff_t i = 0; i < rows; ++i) merge(local, lattice_row(model, static_cast<std::size_t>(i), r));
#pragma omp critical(tailasym_sigma3)
    merge(best, local);
  }
  return best;
}

} // namespace

Sigma3Result sigma3(const CopulaModel& model, std::size_t resolution, Execution exec, bool check_doubling) {
  if (resolution < 2) throw DomainError("sigma3: resolution must be at least 2");
  const LatticeMax best = lattice_search(model, resolution, exec);
  Sigma3Result out;
  out.value = best.value;
  out.resolution = resolution;
  out.spacing = 1.0 / static_cast<double>(resolution);
  out.argmax_u1 = static_cast<double>(best.i) / static_cast<double>(resolution);
  out.argmax_u2 = static_cast<double>(best.j) / static_cast<double>(resolution);
  if (check_doubling) out.doubled_value = lattice_search(model, 2 * resolution, exec).value;
  return out;
}

Sigma3Result sigma3_sample(const PairedSample& sample, std::size_t resolution) {
  if (resolution < 2) throw DomainError("sigma3: resolution must be at least 2");
  if (sample.scale == Scale::Raw) throw DataError("sigma3: sample must be on the uniform or pseudo scale");
  if (sample.empty()) throw DataError("sigma3: empty sample");
  const std::size_t r = resolution;
  const double denom = static_cast<double>(r);
  auto grid = [&](std::size_t k) { return static_cast<double>(k) / denom; };
  // lo[i][j]: points with U1 <= i/r and U2 <= j/r, built from the smallest
  // lattice index reached by each coordinate and a 2D prefix sum.
  // hi[i][j]: points with U1 >= 1 - i/r and U2 >= 1 - j/r.
  const std::size_t w = r + 1;
  std::vector<double> lo(w * w, 0.0), hi(w * w, 0.0);
  auto first_at_or_above = [&](double x) {
    // smallest k with x <= k/r
    auto k = static_cast<std::size_t>(std::clamp(std::ceil(x * denom), 0.0, denom));
    while (k > 0 && x <= grid(k - 1)) --k;
    while (k < r && x > grid(k)) ++k;
    return x <= grid(k) ? k : w;
  };
  auto first_reflected = [&](double x) {
    // smallest k with x >= 1 - k/r
    auto k = static_cast<std::size_t>(std::clamp(std::ceil((1.0 - x) * denom), 0.0, denom));
    while (k > 0 && x >= 1.0 - grid(k - 1)) --k;
    while (k < r && x < 1.0 - grid(k)) ++k;
    return x >= 1.0 - grid(k) ? k : w;
  };
  for (std::size_t n = 0; n < sample.size(); ++n) {
    const std::size_t a = first_at_or_above(sample.x1[n]);
    const std::size_t b = first_at_or_above(sample.x2[n]);
    if (a < w && b < w) lo[a * w + b] += 1.0;
    const std::size_t c = first_reflected(sample.x1[n]);
    const std::size_t d = first_reflected(sample.x2[n]);
    if (c < w && d < w) hi[c * w + d] += 1.0;
  }
  for (auto* m : {&lo, &hi}) {
    auto& v = *m;
    for (std::size_t i = 0; i < w; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        double s = v[i * w + j];
        if (i > 0) s += v[(i - 1) * w + j];
        if (j > 0) s += v[i * w + j - 1];
        if (i > 0 && j > 0) s -= v[(i - 1) * w + j - 1];
        v[i * w + j] = s;
      }
  }
  const double n = static_cast<double>(sample.size());
  LatticeMax best;
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      const double d = std::abs(lo[i * w + j] - hi[i * w + j]) / n;
      if (d > best.value) best = {d, i, j};
    }
  Sigma3Result out;
  out.value = best.value;
  out.resolution = r;
  out.spacing = 1.0 / denom;
  out.argmax_u1 = grid(best.i);
  out.argmax_u2 = grid(best.j);
  return out;
}

namespace {

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = a.size();
  if (m < 3) return std::nullopt;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(m);
  mb /= static_cast<double>(m);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

} // namespace

std::optional<double> rho_k(const PairedSample& sample, double u, WeightFunction weight) {
  if (sample.scale == Scale::Raw) throw DataError("rho_k: sample must be on the uniform or pseudo scale");
  if (!(u > 0.0 && u <= 0.5)) throw DomainError("rho_k: u outside (0, 0.5]");
  std::vector<double> l1, l2, h1, h2;
  const double thr = 1.0 - u;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double a = sample.x1[i];
    const double b = sample.x2[i];
    if (a < u && b < u) {
      l1.push_back(apply_weight(weight, 1.0 - a / u));
      l2.push_back(apply_weight(weight, 1.0 - b / u));
    }
    if (a > thr && b > thr) {
      h1.push_back(apply_weight(weight, 1.0 - (1.0 - a) / u));
      h2.push_back(apply_weight(weight, 1.0 - (1.0 - b) / u));
    }
  }
  const auto lower = pearson(l1, l2);
  const auto upper = pearson(h1, h2);
  if (!lower || !upper) return std::nullopt;
  return *lower - *upper;
}

TailCurve rho_k_curve(const PairedSample& sample, std::span<const double> u_grid, WeightFunction weight,
                      bool negate) {
  validate_u_grid(u_grid);
  TailCurve curve;
  curve.kind = CurveKind::RhoK;
  curve.meta = {{"weight", std::string(weight_name(weight))}, {"negated", negate}, {"source", "sample"}};
  nlohmann::json undefined = nlohmann::json::array();
  for (double u : u_grid) {
    // Points where either corner correlation is undefined are left out of
    // the curve and listed in the metadata instead.
    const auto v = rho_k(sample, u, weight);
    if (!v) {
      undefined.push_back(u);
      continue;
    }
    curve.u_grid.push_back(u);
    curve.values.push_back(ExtendedReal::finite(negate ? -*v : *v));
  }
  if (!undefined.empty()) curve.meta["undefined_at"] = undefined;
  return curve;
}

AlphaMatrix alpha_matrix(std::span<const std::vector<double>> columns, double u) {
  if (columns.empty()) throw DataError("alpha_matrix: no columns");
  const std::size_t n = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) throw DataError("alpha_matrix: columns differ in length");
  AlphaMatrix out;
  out.d = columns.size();
  out.u = u;
  out.entries.resize(out.d * out.d);
  for (std::size_t i = 0; i < out.d; ++i)
    for (std::size_t j = 0; j < out.d; ++j) {
      PairedSample s;
      s.scale = Scale::Uniform;
      s.x1 = columns[i];
      s.x2 = columns[j];
      out.entries[i * out.d + j] = alpha_hat(s, u);
    }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_curve_csv(std::ostream& os, const TailCurve& curve, bool header) {
  if (header) os << "u,value,kind,param_json\n";
  const std::string meta = csv_field(curve.meta.dump());
  const std::string_view kind = curve_kind_name(curve.kind);
  for (std::size_t i = 0; i < curve.u_grid.size(); ++i)
    os << ExtendedReal::finite(curve.u_grid[i]).to_string() << ',' << curve.values[i].to_string() << ','
       << kind << ',' << meta << '\n';
}

} // namespace tailasym
