// Command-line front end. Exit codes: 0 success, 2 usage/config/domain
// error, 3 data error, 4 numerical failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailasym/analysis.hpp"
#include "tailasym/copula.hpp"
#include "tailasym/csv_io.hpp"
#include "tailasym/errors.hpp"
#include "tailasym/estimation.hpp"
#include "tailasym/sampling.hpp"
#include "tailasym/simulation.hpp"
#include "tailasym/tail_measures.hpp"
#include "tailasym/version.hpp"

using namespace tailasym;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

Scale parse_scale(const std::string& s) {
  if (s == "raw") return Scale::Raw;
  if (s == "uniform") return Scale::Uniform;
  throw ConfigError("--scale must be raw or uniform");
}

IntervalMethod parse_method(const std::string& s) {
  if (s == "asymptotic") return IntervalMethod::Asymptotic;
  if (s == "bonferroni") return IntervalMethod::Bonferroni;
  if (s == "bootstrap") return IntervalMethod::Bootstrap;
  throw ConfigError("unknown method '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Writes to the named file, or stdout for "" / "-".
template <class F>
void with_output(const std::string& path, F&& f) {
  if (path.empty() || path == "-") {
    f(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  f(out);
}

PairedSample load_copula_scale(const std::string& path, Scale scale) {
  const PairedSample s = read_pair_csv(path, scale);
  return scale == Scale::Raw ? pseudo_observations(s) : s;
}

json tail_summary_json(const TailSummary& t) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"lambda_lower", opt(t.lambda_lower)}, {"lambda_upper", opt(t.lambda_upper)},
          {"kappa_lower", opt(t.kappa_lower)},   {"kappa_upper", opt(t.kappa_upper)},
          {"upsilon_lower", opt(t.upsilon_lower)}, {"upsilon_upper", opt(t.upsilon_upper)}};
}

// Null curve for the test: "0" or a curve CSV (u,value,...) interpolated linearly.
std::vector<double> null_values(const std::string& spec, const std::vector<double>& points) {
  if (spec == "0") return std::vector<double>(points.size(), 0.0);
  std::ifstream in(spec, std::ios::binary);
  if (!in) throw DataError("cannot open null curve '" + spec + "'");
  std::vector<std::pair<double, double>> curve;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() < 2) throw DataError("null curve line " + std::to_string(lineno) + ": expected u,value");
    try {
      std::size_t pos = 0;
      const double u = std::stod(f[0], &pos);
      const ExtendedReal v = parse_extended(f[1]);
      if (!v.is_finite()) throw DataError("null curve line " + std::to_string(lineno) + ": value must be finite");
      curve.emplace_back(u, v.value());
    } catch (const std::invalid_argument&) {
      if (lineno == 1) continue;  // header
      throw DataError("null curve line " + std::to_string(lineno) + ": non-numeric value");
    }
  }
  if (curve.empty()) throw DataError("null curve '" + spec + "' has no rows");
  std::sort(curve.begin(), curve.end());
  std::vector<double> out;
  for (double u : points) {
    if (u < curve.front().first - 1e-12 || u > curve.back().first + 1e-12)
      throw DataError("null curve does not cover u = " + format_double(u));
    auto it = std::lower_bound(curve.begin(), curve.end(), std::make_pair(u, -1e300));
    if (it == curve.end()) it = std::prev(curve.end());
    if (std::abs(it->first - u) <= 1e-12 || it == curve.begin()) {
      out.push_back(it->second);
      continue;
    }
    const auto lo = *std::prev(it);
    const double w = (u - lo.first) / (it->first - lo.first);
    out.push_back(lo.second + w * (it->second - lo.second));
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Copula tail-asymmetry measures: population curves, estimation, tests, simulation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // measure
  auto* measure = app.add_subcommand("measure", "Population curves and limits for a copula model");
  std::string m_model, m_grid = "0.01:0.5:0.01", m_kind = "alpha", m_out, m_summary;
  double m_kappa = 1.0;
  std::size_t m_sigma3 = 400;
  measure->add_option("--model", m_model, "family:key=value,... (e.g. bb7:delta=1.94,theta=1.71)")->required();
  measure->add_option("--u-grid", m_grid, "a:b:step or comma list in (0, 0.5]");
  measure->add_option("--kind", m_kind, "alpha or beta")->check(CLI::IsMember({"alpha", "beta"}));
  measure->add_option("--kappa", m_kappa, "beta index (>= 1)");
  measure->add_option("--out", m_out, "curve CSV (default stdout)");
  measure->add_option("--summary", m_summary, "JSON with tail coefficients, alpha(0) and sigma3");
  measure->add_option("--sigma3-resolution", m_sigma3, "lattice resolution for sigma3 (0 disables)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "alpha_hat with confidence intervals from data");
  std::string e_input, e_scale = "uniform", e_grid = "jumps", e_method = "asymptotic", e_out;
  double e_level = 0.9;
  std::size_t e_resamples = 999;
  std::optional<std::uint64_t> e_seed;
  estimate->add_option("--input", e_input, "two-column CSV")->required();
  estimate->add_option("--scale", e_scale, "raw (ranked to pseudo-observations) or uniform");
  estimate->add_option("--u-grid", e_grid, "a:b:step, comma list, or jumps");
  estimate->add_option("--level", e_level, "confidence level");
  estimate->add_option("--method", e_method, "asymptotic, bonferroni or bootstrap");
  estimate->add_option("--resamples", e_resamples, "bootstrap resamples");
  estimate->add_option("--seed", e_seed, "master seed (required for bootstrap)");
  estimate->add_option("--out", e_out, "output CSV (default stdout)");

  // test
  auto* test = app.add_subcommand("test", "chi-squared test of alpha at several u");
  std::string t_input, t_scale = "uniform", t_points, t_null = "0", t_out;
  double t_size = 0.1, t_u_max = 0.1;
  std::size_t t_m = 11, t_threshold = 30;
  test->add_option("--input", t_input, "two-column CSV")->required();
  test->add_option("--scale", t_scale, "raw or uniform");
  test->add_option("--u-points", t_points, "u1,...,um or 'auto' (m points on [u_min, u-max])")->required();
  test->add_option("--null", t_null, "0 or a curve CSV with u,value columns");
  test->add_option("--size", t_size, "nominal size");
  test->add_option("--m", t_m, "number of points for --u-points auto");
  test->add_option("--u-max", t_u_max, "upper end for --u-points auto");
  test->add_option("--threshold", t_threshold, "corner-count threshold behind u_min");
  test->add_option("--out", t_out, "JSON report (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw pairs from a copula or the Clayton-Cauchy model");
  std::string s_model, s_out;
  std::size_t s_n = 0;
  std::uint64_t s_seed = 0, s_stream = 0;
  sample->add_option("--model", s_model, "copula spec, or clayton-cauchy:theta=...")->required();
  sample->add_option("--n", s_n, "sample size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", s_seed, "master seed")->required();
  sample->add_option("--stream", s_stream, "stream id");
  sample->add_option("--out", s_out, "CSV path; a .json sidecar is written next to it")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo coverage / size / power study");
  std::string sim_scenario, sim_preset, sim_out;
  std::optional<std::uint64_t> sim_seed;
  auto* sc_opt = simulate->add_option("--scenario", sim_scenario, "scenario JSON");
  auto* pr_opt = simulate->add_option("--preset", sim_preset, "desk or full");
  sc_opt->excludes(pr_opt);
  simulate->add_option("--seed", sim_seed, "master seed (overrides the scenario; required with --preset)");
  simulate->add_option("--out", sim_out, "output directory")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Full pipeline on a residual/observation file");
  std::string a_config, a_input, a_scale = "raw", a_margin = "none", a_grid = "jumps", a_methods, a_weights = "x,x2,x4",
                        a_rho_grid = "0.01:0.5:0.01", a_out;
  double a_level = 0.9, a_u_max = 0.1;
  std::size_t a_resamples = 999, a_sigma3 = 400, a_m = 11, a_threshold = 30;
  std::optional<std::uint64_t> a_seed;
  bool a_negate = false, a_no_test = false;
  analyze->add_option("--config", a_config, "config or manifest JSON (other flags are ignored)");
  analyze->add_option("--input", a_input, "two-column CSV");
  analyze->add_option("--scale", a_scale, "raw or uniform");
  analyze->add_option("--margin", a_margin, "none (pseudo-observations), normal(mu,sigma), cauchy(loc,scale), student_t(nu,loc,scale)");
  analyze->add_option("--u-grid", a_grid, "jumps or a:b:step");
  analyze->add_option("--level", a_level, "confidence level");
  analyze->add_option("--methods", a_methods, "comma list of asymptotic,bonferroni,bootstrap");
  analyze->add_option("--resamples", a_resamples, "bootstrap resamples");
  analyze->add_option("--seed", a_seed, "master seed (required for bootstrap)");
  analyze->add_option("--m", a_m, "chi-squared test points");
  analyze->add_option("--u-max", a_u_max, "upper end of the test points");
  analyze->add_flag("--no-test", a_no_test, "skip the chi-squared test");
  analyze->add_option("--threshold", a_threshold, "corner-count threshold behind u_min");
  analyze->add_option("--sigma3-resolution", a_sigma3, "lattice resolution for sigma3 (0 disables)");
  analyze->add_option("--rho-weights", a_weights, "comma list of x,x2,x4 (empty disables)");
  analyze->add_option("--rho-grid", a_rho_grid, "grid for the rho_K curves");
  analyze->add_flag("--negate", a_negate, "report -rho_K");
  analyze->add_option("--out", a_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*measure) {
      const CopulaModel model = CopulaModel::parse(m_model);
      const auto grid = parse_u_grid(m_grid);
      const TailCurve curve = m_kind == "alpha" ? alpha_curve(model, grid) : beta_curve(model, grid, m_kappa);
      with_output(m_out, [&](std::ostream& os) { write_curve_csv(os, curve); });
      if (!m_summary.empty()) {
        const LimitResult lim = alpha_limit(model);
        json j = {{"model", model.spec()},
                  {"tail_summary", tail_summary_json(tail_summary(model))},
                  {"alpha_limit", lim.value ? extended_to_json(*lim.value) : json(nullptr)},
                  {"alpha_limit_rule", std::string(limit_rule_name(lim.rule))},
                  {"radially_symmetric", model.radially_symmetric()}};
        const double seq[] = {1e-2, 1e-3, 1e-4};
        const NumericLimit nl = alpha_zero_numeric(model, seq);
        json iters = json::array();
        for (const auto& v : nl.iterates) iters.push_back(extended_to_json(v));
        j["alpha_zero_numeric"] = {{"u", nl.u},
                                   {"iterates", iters},
                                   {"value", extended_to_json(nl.value)},
                                   {"status", std::string(limit_status_name(nl.status))}};
        if (m_sigma3 >= 2) {
          const Sigma3Result s = sigma3(model, m_sigma3, Execution::Parallel, true);
          j["sigma3"] = {{"value", s.value},
                         {"resolution", s.resolution},
                         {"spacing", s.spacing},
                         {"argmax", {s.argmax_u1, s.argmax_u2}},
                         {"value_at_double_resolution", *s.doubled_value}};
        }
        with_output(m_summary, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
      }
      return 0;
    }

    if (*estimate) {
      const Scale scale = parse_scale(e_scale);
      const IntervalMethod method = parse_method(e_method);
      const PairedSample data = read_pair_csv(e_input, scale);
      const PairedSample copula_scale = scale == Scale::Raw ? pseudo_observations(data) : data;
      const std::vector<double> grid =
          e_grid == "jumps" ? TailCounter(copula_scale).jump_set() : parse_u_grid(e_grid);
      IntervalBand band;
      switch (method) {
      case IntervalMethod::Asymptotic: band = ci_pointwise(copula_scale, grid, e_level); break;
      case IntervalMethod::Bonferroni: band = ci_bonferroni_on_grid(copula_scale, grid, e_level); break;
      case IntervalMethod::Bootstrap: {
        if (!e_seed) throw ConfigError("--seed is required for bootstrap intervals");
        PairedSample raw = data;
        raw.scale = Scale::Raw;
        band = ci_bootstrap(raw, grid, e_level, e_resamples, *e_seed);
        break;
      }
      }
      with_output(e_out, [&](std::ostream& os) { write_band_csv(os, band); });
      return 0;
    }

    if (*test) {
      const PairedSample data = load_copula_scale(t_input, parse_scale(t_scale));
      std::vector<double> points;
      json extra = json::object();
      if (t_points == "auto") {
        const auto u_min = u_min_rule(data, t_threshold);
        if (!u_min) throw DataError("u_min rule: corner counts never reach the threshold");
        if (!(*u_min < t_u_max)) throw DataError("u_min " + format_double(*u_min) + " is not below --u-max");
        points = equispaced_points(*u_min, t_u_max, t_m);
        extra["u_min"] = *u_min;
      } else {
        for (const auto& p : split(t_points, ',')) {
          try {
            points.push_back(std::stod(p));
          } catch (const std::exception&) {
            throw ConfigError("--u-points: bad number '" + p + "'");
          }
        }
      }
      const auto null = null_values(t_null, points);
      json j = test_report_to_json(chi2_test(data, points, null, t_size));
      j.update(extra);
      with_output(t_out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
      return 0;
    }

    if (*sample) {
      const ScenarioModel model = ScenarioModel::parse(s_model);
      const SeedSpec seed{s_seed, s_stream};
      const PairedSample data = model.cauchy_margins ? sample_clayton_cauchy(model.copula.param(0), s_n, seed)
                                                     : sample_copula(model.copula, s_n, seed);
      with_output(s_out, [&](std::ostream& os) { write_pair_csv(os, data); });
      const auto params = model.copula.params();
      json side = {{"family", model.cauchy_margins ? std::string("clayton-cauchy")
                                                   : std::string(family_name(model.copula.family()))},
                   {"spec", model.spec()},
                   {"params", std::vector<double>(params.begin(), params.end())},
                   {"rotated", model.copula.rotated()},
                   {"n", s_n},
                   {"master_seed", s_seed},
                   {"stream_id", s_stream},
                   {"scale", std::string(scale_name(data.scale))},
                   {"version", kVersion}};
      with_output(s_out + ".json", [&](std::ostream& os) { os << side.dump(2) << '\n'; });
      return 0;
    }

    if (*simulate) {
      Scenario sc;
      if (!sim_scenario.empty()) {
        std::ifstream in(sim_scenario, std::ios::binary);
        if (!in) throw DataError("cannot open scenario '" + sim_scenario + "'");
        json j;
        try {
          j = json::parse(in);
        } catch (const json::parse_error& e) {
          throw ConfigError(std::string("scenario JSON: ") + e.what());
        }
        sc = scenario_from_json(j);
      } else if (!sim_preset.empty()) {
        if (!sim_seed) throw ConfigError("--seed is required with --preset");
        sc = scenario_preset(sim_preset);
      } else {
        throw ConfigError("simulate needs --scenario or --preset");
      }
      if (sim_seed) sc.master_seed = *sim_seed;
      const SimulationReport rep = run_scenario(sc);
      rep.write(sim_out);
      return 0;
    }

    if (*analyze) {
      AnalysisConfig cfg;
      if (!a_config.empty()) {
        std::ifstream in(a_config, std::ios::binary);
        if (!in) throw DataError("cannot open config '" + a_config + "'");
        try {
          cfg = analysis_config_from_json(json::parse(in));
        } catch (const json::parse_error& e) {
          throw ConfigError(std::string("config JSON: ") + e.what());
        }
      } else {
        cfg.input = a_input;
        cfg.scale = parse_scale(a_scale);
        cfg.margin = Margin::parse(a_margin);
        cfg.u_grid = a_grid;
        cfg.level = a_level;
        for (const auto& m : split(a_methods, ',')) cfg.methods.push_back(parse_method(m));
        cfg.resamples = a_resamples;
        cfg.seed = a_seed;
        cfg.run_test = !a_no_test;
        cfg.test_m = a_m;
        cfg.test_u_max = a_u_max;
        cfg.threshold = a_threshold;
        cfg.sigma3_resolution = a_sigma3;
        cfg.rho_weights.clear();
        for (const auto& w : split(a_weights, ',')) cfg.rho_weights.push_back(parse_weight(w));
        cfg.rho_grid = a_rho_grid;
        cfg.negate_rho = a_negate;
      }
      run_analysis(cfg, a_out);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
