#include "tailasym/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tailasym/csv_io.hpp"
#include "tailasym/errors.hpp"
#include "tailasym/sampling.hpp"
#include "tailasym/special_functions.hpp"
#include "tailasym/tail_measures.hpp"

namespace tailasym {

using nlohmann::json;

nlohmann::json extended_to_json(const ExtendedReal& v) {
  if (v.is_finite()) return v.value();
  return v.to_string();
}

// ---------------------------------------------------------------------------
// Scenario description

ScenarioModel ScenarioModel::parse(std::string_view spec) {
  std::string lower;
  for (char c : spec) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const std::string_view prefix = "clayton-cauchy";
  ScenarioModel m;
  if (lower.rfind(prefix, 0) == 0) {
    // Same parameter syntax as the copula spec, with the family renamed.
    m.copula = CopulaModel::parse("clayton" + std::string(spec.substr(prefix.size())));
    if (!(m.copula.param(0) > 0.0) || m.copula.rotated())
      throw ConfigError("clayton-cauchy requires theta > 0 and no rotation");
    m.cauchy_margins = true;
  } else {
    m.copula = CopulaModel::parse(spec);
  }
  return m;
}

std::string ScenarioModel::spec() const {
  if (!cauchy_margins) return copula.spec();
  return "clayton-cauchy:theta=" + format_double(copula.param(0));
}

void Scenario::validate() const {
  try {
    (void)ScenarioModel::parse(model);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario model: ") + e.what());
  }
  if (n < 2) throw ConfigError("scenario: n must be at least 2");
  if (replications < 1) throw ConfigError("scenario: replications must be at least 1");
  if (u_grid.empty()) throw ConfigError("scenario: u_grid is empty");
  try {
    validate_u_grid(u_grid);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (levels.empty()) throw ConfigError("scenario: no confidence levels");
  for (double l : levels)
    if (!(l > 0.0 && l < 1.0)) throw ConfigError("scenario: levels must lie in (0, 1)");
  if (methods.empty()) throw ConfigError("scenario: no interval methods");
  const bool boot = std::find(methods.begin(), methods.end(), IntervalMethod::Bootstrap) != methods.end();
  if (boot && resamples < 1) throw ConfigError("scenario: bootstrap needs resamples >= 1");
  if (!(band_u_lower > 0.0 && band_u_lower <= band_u_upper && band_u_upper <= 0.5))
    throw ConfigError("scenario: band range must satisfy 0 < lower <= upper <= 0.5");
  if (chi2) {
    if (chi2->u_points.empty()) {
      if (chi2->m < 1) throw ConfigError("scenario chi2: m must be at least 1");
      if (!(chi2->u_max > 0.0 && chi2->u_max <= 0.5)) throw ConfigError("scenario chi2: u_max outside (0, 0.5]");
      if (chi2->threshold < 1) throw ConfigError("scenario chi2: threshold must be at least 1");
    } else {
      try {
        validate_u_grid(chi2->u_points);
      } catch (const DomainError& e) {
        throw ConfigError(std::string("scenario chi2: ") + e.what());
      }
    }
    if (!(chi2->size > 0.0 && chi2->size < 1.0)) throw ConfigError("scenario chi2: size must lie in (0, 1)");
  }
}

namespace {

IntervalMethod parse_method(const std::string& s) {
  if (s == "asymptotic") return IntervalMethod::Asymptotic;
  if (s == "bonferroni") return IntervalMethod::Bonferroni;
  if (s == "bootstrap") return IntervalMethod::Bootstrap;
  throw ConfigError("unknown interval method '" + s + "'");
}

template <class T>
T get_or(const json& j, const char* key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario field '") + key + "': " + e.what());
  }
}

} // namespace

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  static const char* known[] = {"name",    "model",       "n",      "replications", "u_grid",
                                "levels",  "methods",     "resamples", "master_seed", "chi2",
                                "band_u_lower", "band_u_upper"};
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::find_if(std::begin(known), std::end(known), [&](const char* s) { return k == s; }) == std::end(known))
      throw ConfigError("scenario: unknown field '" + k + "'");
  }
  Scenario s;
  s.name = get_or<std::string>(j, "name", s.name);
  if (!j.contains("model")) throw ConfigError("scenario: missing 'model'");
  s.model = get_or<std::string>(j, "model", s.model);
  const auto n = get_or<long long>(j, "n", static_cast<long long>(s.n));
  const auto reps = get_or<long long>(j, "replications", static_cast<long long>(s.replications));
  const auto resamples = get_or<long long>(j, "resamples", static_cast<long long>(s.resamples));
  if (n < 0 || reps < 0 || resamples < 0) throw ConfigError("scenario: counts must be non-negative");
  s.n = static_cast<std::size_t>(n);
  s.replications = static_cast<std::size_t>(reps);
  s.resamples = static_cast<std::size_t>(resamples);
  if (j.contains("u_grid")) {
    const json& g = j.at("u_grid");
    if (g.is_string()) s.u_grid = parse_u_grid(g.get<std::string>());
    else s.u_grid = get_or<std::vector<double>>(j, "u_grid", {});
  } else {
    s.u_grid = parse_u_grid("0.05:0.5:0.05");
  }
  s.levels = get_or<std::vector<double>>(j, "levels", s.levels);
  if (j.contains("methods")) {
    s.methods.clear();
    for (const auto& m : get_or<std::vector<std::string>>(j, "methods", {})) s.methods.push_back(parse_method(m));
  }
  s.master_seed = get_or<std::uint64_t>(j, "master_seed", s.master_seed);
  s.band_u_lower = get_or<double>(j, "band_u_lower", s.band_u_lower);
  s.band_u_upper = get_or<double>(j, "band_u_upper", s.band_u_upper);
  if (j.contains("chi2") && !j.at("chi2").is_null()) {
    const json& c = j.at("chi2");
    Chi2Config cfg;
    cfg.u_points = get_or<std::vector<double>>(c, "u_points", {});
    cfg.m = get_or<std::size_t>(c, "m", cfg.m);
    cfg.u_max = get_or<double>(c, "u_max", cfg.u_max);
    cfg.threshold = get_or<std::size_t>(c, "threshold", cfg.threshold);
    cfg.size = get_or<double>(c, "size", cfg.size);
    const auto null = get_or<std::string>(c, "null", "zero");
    if (null != "zero" && null != "truth") throw ConfigError("scenario chi2: null must be 'zero' or 'truth'");
    cfg.null_is_truth = null == "truth";
    s.chi2 = cfg;
  }
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["model"] = s.model;
  j["n"] = s.n;
  j["replications"] = s.replications;
  j["u_grid"] = s.u_grid;
  j["levels"] = s.levels;
  json methods = json::array();
  for (auto m : s.methods) methods.push_back(std::string(interval_method_name(m)));
  j["methods"] = methods;
  j["resamples"] = s.resamples;
  j["master_seed"] = s.master_seed;
  j["band_u_lower"] = s.band_u_lower;
  j["band_u_upper"] = s.band_u_upper;
  if (s.chi2) {
    j["chi2"] = {{"u_points", s.chi2->u_points}, {"m", s.chi2->m},       {"u_max", s.chi2->u_max},
                 {"threshold", s.chi2->threshold}, {"size", s.chi2->size},
                 {"null", s.chi2->null_is_truth ? "truth" : "zero"}};
  }
  return j;
}

Scenario scenario_preset(std::string_view name) {
  Scenario s;
  s.model = "clayton-cauchy:theta=20";
  s.levels = {0.9};
  s.methods = {IntervalMethod::Asymptotic, IntervalMethod::Bonferroni, IntervalMethod::Bootstrap};
  s.master_seed = 20240601;
  if (name == "desk") {
    s.name = "desk";
    s.n = 2000;
    s.replications = 500;
    s.resamples = 199;
    s.u_grid = parse_u_grid("0.05:0.5:0.05");
  } else if (name == "full") {
    s.name = "full";
    s.n = 10000;
    s.replications = 100;
    s.resamples = 999;
    s.u_grid = parse_u_grid("0.01:0.5:0.01");
  } else {
    throw ConfigError("unknown scenario preset '" + std::string(name) + "' (expected desk or full)");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Monte-Carlo run

namespace {

struct BandResult {
  std::vector<ExtendedReal> lower, upper;
  std::vector<std::size_t> nonfinite;
};

struct ReplicationResult {
  std::vector<ExtendedReal> alpha_hat, alpha_star;
  std::vector<BandResult> bands;          // [level][method]
  std::vector<char> simultaneous_covered; // per level
  std::vector<std::size_t> simultaneous_points;
  bool chi2_ran = false, chi2_failed = false, chi2_reject = false;
  double chi2_statistic = 0.0, chi2_u_min = 0.0;
};

bool covers(const ExtendedReal& lo, const ExtendedReal& hi, const ExtendedReal& truth) {
  return lo <= truth && truth <= hi;
}

ReplicationResult run_replication(const Scenario& sc, const ScenarioModel& model, std::size_t r) {
  const SeedSpec seed{sc.master_seed, static_cast<std::uint64_t>(r)};
  PairedSample uniform, raw;
  if (model.cauchy_margins) {
    raw = sample_clayton_cauchy(model.copula.param(0), sc.n, seed);
    uniform.scale = Scale::Uniform;
    uniform.x1.resize(sc.n);
    uniform.x2.resize(sc.n);
    for (std::size_t i = 0; i < sc.n; ++i) {
      uniform.x1[i] = cauchy_cdf(raw.x1[i]);
      uniform.x2[i] = cauchy_cdf(raw.x2[i]);
    }
  } else {
    uniform = sample_copula(model.copula, sc.n, seed);
    raw = uniform;
    raw.scale = Scale::Raw;
  }

  ReplicationResult out;
  const TailCounter counter(uniform);
  const TailCounter star_counter(pseudo_observations(raw));
  for (double u : sc.u_grid) {
    out.alpha_hat.push_back(alpha_from_counts(counter.counts(u)));
    out.alpha_star.push_back(alpha_from_counts(star_counter.counts(u)));
  }

  const bool boot = std::find(sc.methods.begin(), sc.methods.end(), IntervalMethod::Bootstrap) != sc.methods.end();
  const bool bonf = std::find(sc.methods.begin(), sc.methods.end(), IntervalMethod::Bonferroni) != sc.methods.end();
  std::vector<std::vector<ExtendedReal>> reps;
  if (boot)
    reps = bootstrap_replicates(raw, sc.u_grid, sc.resamples, sc.master_seed, static_cast<std::uint64_t>(r),
                                Execution::Serial);

  for (double level : sc.levels) {
    for (IntervalMethod m : sc.methods) {
      IntervalBand band;
      switch (m) {
      case IntervalMethod::Asymptotic: band = ci_pointwise(uniform, sc.u_grid, level); break;
      case IntervalMethod::Bonferroni: band = ci_bonferroni_on_grid(uniform, sc.u_grid, level); break;
      case IntervalMethod::Bootstrap: band = ci_bootstrap_from_replicates(raw, sc.u_grid, level, reps); break;
      }
      BandResult b{band.lower, band.upper, band.nonfinite_replicates};
      out.bands.push_back(std::move(b));
    }
    if (bonf) {
      const IntervalBand band = ci_band_bonferroni(uniform, level);
      bool ok = true;
      std::size_t points = 0;
      for (std::size_t i = 0; i < band.size(); ++i) {
        const double u = band.u[i];
        if (u < sc.band_u_lower || u > sc.band_u_upper) continue;
        ++points;
        if (!covers(band.lower[i], band.upper[i], alpha_population(model.copula, u))) ok = false;
      }
      out.simultaneous_covered.push_back(ok ? 1 : 0);
      out.simultaneous_points.push_back(points);
    }
  }

  if (sc.chi2) {
    const Chi2Config& c = *sc.chi2;
    out.chi2_ran = true;
    std::vector<double> points = c.u_points;
    if (points.empty()) {
      const auto u_min = u_min_rule(uniform, c.threshold);
      if (!u_min || !(*u_min < c.u_max)) {
        out.chi2_failed = true;
        return out;
      }
      out.chi2_u_min = *u_min;
      points = equispaced_points(*u_min, c.u_max, c.m);
    }
    std::vector<double> null(points.size(), 0.0);
    if (c.null_is_truth)
      for (std::size_t i = 0; i < points.size(); ++i) null[i] = alpha_population(model.copula, points[i]).to_double();
    try {
      const TestReport rep = chi2_test(uniform, points, null, c.size);
      out.chi2_statistic = rep.statistic;
      out.chi2_reject = rep.reject;
    } catch (const NumericalError&) {
      out.chi2_failed = true;
    }
  }
  return out;
}

} // namespace

SimulationReport run_scenario(const Scenario& sc) {
  sc.validate();
  const auto start = std::chrono::steady_clock::now();
  const ScenarioModel model = ScenarioModel::parse(sc.model);
  std::vector<ExtendedReal> truth;
  for (double u : sc.u_grid) truth.push_back(alpha_population(model.copula, u));

  std::vector<ReplicationResult> results(sc.replications);
  std::exception_ptr error;
  const auto count = static_cast<std::ptrdiff_t>(sc.replications);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    try {
      results[static_cast<std::size_t>(r)] = run_replication(sc, model, static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp critical(tailasym_sim_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  // Aggregation runs serially in replication order, so the report does not
  // depend on thread scheduling.
  SimulationReport rep;
  rep.scenario = sc;
  const std::size_t g = sc.u_grid.size();
  const std::size_t reps = sc.replications;
  for (std::size_t k = 0; k < g; ++k) {
    EstimateSummary e;
    e.u = sc.u_grid[k];
    e.truth = truth[k];
    e.replications = reps;
    std::size_t fin_hat = 0, fin_star = 0;
    for (const auto& res : results) {
      const ExtendedReal& a = res.alpha_hat[k];
      const ExtendedReal& s = res.alpha_star[k];
      if (a.is_finite()) {
        ++fin_hat;
        e.mean_alpha_hat += a.value();
        if (truth[k].is_finite()) e.mean_abs_error_hat += std::abs(a.value() - truth[k].value());
      } else {
        ++e.nonfinite_hat;
      }
      if (s.is_finite()) {
        ++fin_star;
        e.mean_alpha_star += s.value();
        if (truth[k].is_finite()) e.mean_abs_error_star += std::abs(s.value() - truth[k].value());
      } else {
        ++e.nonfinite_star;
      }
    }
    if (fin_hat) {
      e.mean_alpha_hat /= static_cast<double>(fin_hat);
      e.mean_abs_error_hat /= static_cast<double>(fin_hat);
    }
    if (fin_star) {
      e.mean_alpha_star /= static_cast<double>(fin_star);
      e.mean_abs_error_star /= static_cast<double>(fin_star);
    }
    rep.estimates.push_back(e);
  }

  const std::size_t nm = sc.methods.size();
  for (std::size_t li = 0; li < sc.levels.size(); ++li)
    for (std::size_t mi = 0; mi < nm; ++mi)
      for (std::size_t k = 0; k < g; ++k) {
        IntervalSummary s;
        s.method = sc.methods[mi];
        s.level = sc.levels[li];
        s.u = sc.u_grid[k];
        s.replications = reps;
        double width = 0.0;
        for (const auto& res : results) {
          const BandResult& b = res.bands[li * nm + mi];
          if (covers(b.lower[k], b.upper[k], truth[k])) ++s.covered;
          if (b.lower[k].is_finite() && b.upper[k].is_finite()) {
            ++s.bounded;
            width += b.upper[k].value() - b.lower[k].value();
          }
          if (!b.nonfinite.empty()) s.nonfinite_replicates += b.nonfinite[k];
        }
        if (s.bounded) s.mean_width = width / static_cast<double>(s.bounded);
        rep.intervals.push_back(s);
      }

  if (!results.empty() && !results.front().simultaneous_covered.empty()) {
    for (std::size_t li = 0; li < sc.levels.size(); ++li) {
      SimultaneousSummary s;
      s.level = sc.levels[li];
      s.replications = reps;
      double pts = 0.0;
      for (const auto& res : results) {
        s.covered += static_cast<std::size_t>(res.simultaneous_covered[li]);
        pts += static_cast<double>(res.simultaneous_points[li]);
      }
      s.mean_points = pts / static_cast<double>(reps);
      rep.simultaneous.push_back(s);
    }
  }

  if (sc.chi2) {
    Chi2Summary c;
    c.replications = reps;
    std::size_t ok = 0;
    for (const auto& res : results) {
      if (res.chi2_failed) {
        ++c.failures;
        continue;
      }
      ++ok;
      c.rejections += res.chi2_reject ? 1 : 0;
      c.mean_statistic += res.chi2_statistic;
      c.mean_u_min += res.chi2_u_min;
    }
    if (ok) {
      c.mean_statistic /= static_cast<double>(ok);
      c.mean_u_min /= static_cast<double>(ok);
    }
    rep.chi2 = c;
  }

  // Replication 0 as a single realization, using the first level.
  const ReplicationResult& r0 = results.front();
  Realization& real = rep.realization;
  real.u = sc.u_grid;
  real.truth = truth;
  real.alpha_hat = r0.alpha_hat;
  real.alpha_star = r0.alpha_star;
  for (std::size_t mi = 0; mi < nm; ++mi) {
    if (sc.methods[mi] == IntervalMethod::Asymptotic) {
      real.asym_lower = r0.bands[mi].lower;
      real.asym_upper = r0.bands[mi].upper;
    } else if (sc.methods[mi] == IntervalMethod::Bootstrap) {
      real.boot_lower = r0.bands[mi].lower;
      real.boot_upper = r0.bands[mi].upper;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

json SimulationReport::to_json() const {
  json j;
  j["scenario"] = scenario_to_json(scenario);
  json est = json::array();
  for (const auto& e : estimates)
    est.push_back({{"u", e.u},
                   {"alpha", extended_to_json(e.truth)},
                   {"replications", e.replications},
                   {"mean_alpha_hat", e.mean_alpha_hat},
                   {"mean_abs_error_hat", e.mean_abs_error_hat},
                   {"nonfinite_hat", e.nonfinite_hat},
                   {"mean_alpha_star", e.mean_alpha_star},
                   {"mean_abs_error_star", e.mean_abs_error_star},
                   {"nonfinite_star", e.nonfinite_star}});
  j["estimates"] = est;
  json iv = json::array();
  for (const auto& s : intervals)
    iv.push_back({{"method", std::string(interval_method_name(s.method))},
                  {"level", s.level},
                  {"u", s.u},
                  {"replications", s.replications},
                  {"coverage", s.coverage()},
                  {"bounded", s.bounded},
                  {"mean_width", s.mean_width},
                  {"nonfinite_replicates", s.nonfinite_replicates}});
  j["intervals"] = iv;
  json sim = json::array();
  for (const auto& s : simultaneous)
    sim.push_back({{"level", s.level},
                   {"u_range", {scenario.band_u_lower, scenario.band_u_upper}},
                   {"replications", s.replications},
                   {"coverage", s.coverage()},
                   {"mean_points", s.mean_points}});
  j["simultaneous_bonferroni"] = sim;
  if (chi2)
    j["chi2"] = {{"replications", chi2->replications},
                 {"rejections", chi2->rejections},
                 {"rejection_rate", chi2->rejection_rate()},
                 {"failures", chi2->failures},
                 {"mean_statistic", chi2->mean_statistic},
                 {"mean_u_min", chi2->mean_u_min}};
  return j;
}

namespace {

std::string ext(const std::vector<ExtendedReal>& v, std::size_t i) {
  return i < v.size() ? v[i].to_string() : std::string();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write '" + p.string() + "'");
  return out;
}

} // namespace

void SimulationReport::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  open_out(base / "report.json") << to_json().dump(2) << '\n';
  {
    auto out = open_out(base / "estimates.csv");
    out << "u,alpha,mean_alpha_hat,mean_abs_error_hat,nonfinite_hat,mean_alpha_star,mean_abs_error_star,"
           "nonfinite_star,replications\n";
    for (const auto& e : estimates)
      out << format_double(e.u) << ',' << e.truth.to_string() << ',' << format_double(e.mean_alpha_hat) << ','
          << format_double(e.mean_abs_error_hat) << ',' << e.nonfinite_hat << ','
          << format_double(e.mean_alpha_star) << ',' << format_double(e.mean_abs_error_star) << ','
          << e.nonfinite_star << ',' << e.replications << '\n';
  }
  {
    auto out = open_out(base / "intervals.csv");
    out << "method,level,u,coverage,replications,bounded,mean_width,nonfinite_replicates\n";
    for (const auto& s : intervals)
      out << interval_method_name(s.method) << ',' << format_double(s.level) << ',' << format_double(s.u) << ','
          << format_double(s.coverage()) << ',' << s.replications << ',' << s.bounded << ','
          << format_double(s.mean_width) << ',' << s.nonfinite_replicates << '\n';
  }
  {
    auto out = open_out(base / "realization.csv");
    out << "u,alpha,alpha_hat,alpha_star,asym_lower,asym_upper,boot_lower,boot_upper\n";
    const Realization& r = realization;
    for (std::size_t i = 0; i < r.u.size(); ++i)
      out << format_double(r.u[i]) << ',' << ext(r.truth, i) << ',' << ext(r.alpha_hat, i) << ','
          << ext(r.alpha_star, i) << ',' << ext(r.asym_lower, i) << ',' << ext(r.asym_upper, i) << ','
          << ext(r.boot_lower, i) << ',' << ext(r.boot_upper, i) << '\n';
  }
  open_out(base / "runtime.json") << json{{"seconds", seconds}}.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Sampler diagnostics

SamplerDiagnostics sampler_diagnostics(const CopulaModel& model, std::size_t n, SeedSpec seed) {
  if (n < 1) throw DomainError("sampler_diagnostics: n must be positive");
  const PairedSample s = sample_copula(model, n, seed);
  SamplerDiagnostics d;
  d.model = model.spec();
  d.n = n;
  d.dkw_bound = std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(n)));

  // C_n(u,u) is the empirical CDF of max(U1, U2); the upper-corner frequency
  // at u is the empirical CDF of 1 - min(U1, U2).
  std::vector<double> mx(n), mn(n);
  for (std::size_t i = 0; i < n; ++i) {
    mx[i] = std::max(s.x1[i], s.x2[i]);
    mn[i] = 1.0 - std::min(s.x1[i], s.x2[i]);
  }
  std::sort(mx.begin(), mx.end());
  std::sort(mn.begin(), mn.end());
  d.diagonal_deviation = ks_statistic_sorted(mx, [&](double t) { return model.diagonal(t); });
  d.survival_deviation = ks_statistic_sorted(mn, [&](double t) {
    return std::max(0.0, 2.0 * t - 1.0 + model.cdf(1.0 - t, 1.0 - t));
  });
  for (int j = 0; j < 2; ++j) {
    std::vector<double> col = j == 0 ? s.x1 : s.x2;
    std::sort(col.begin(), col.end());
    d.margin_ks[j] = ks_statistic_sorted(col, [](double t) { return t; });
    d.margin_ks_pvalue[j] = ks_pvalue(d.margin_ks[j], n);
  }
  const TailCounter counter(s);
  for (double u : {0.05, 0.01, 0.005}) {
    const TailCounts c = counter.counts(u);
    d.lambda_u.push_back(u);
    d.lambda_lower_empirical.push_back(c.t_lower() / u);
    d.lambda_upper_empirical.push_back(c.t_upper() / u);
    d.lambda_lower_model.push_back(model.diagonal(u) / u);
    d.lambda_upper_model.push_back(model.survival_diagonal(u) / u);
  }
  return d;
}

json SamplerDiagnostics::to_json() const {
  return {{"model", model},
          {"n", n},
          {"diagonal_deviation", diagonal_deviation},
          {"survival_deviation", survival_deviation},
          {"dkw_bound_99", dkw_bound},
          {"margin_ks", {margin_ks[0], margin_ks[1]}},
          {"margin_ks_pvalue", {margin_ks_pvalue[0], margin_ks_pvalue[1]}},
          {"lambda_u", lambda_u},
          {"lambda_lower_empirical", lambda_lower_empirical},
          {"lambda_upper_empirical", lambda_upper_empirical},
          {"lambda_lower_model", lambda_lower_model},
          {"lambda_upper_model", lambda_upper_model}};
}

} // namespace tailasym
