#include "tailasym/analysis.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "tailasym/csv_io.hpp"
#include "tailasym/errors.hpp"
#include "tailasym/version.hpp"

namespace tailasym {

using nlohmann::json;

AnalysisMode AnalysisConfig::mode() const {
  if (scale != Scale::Raw) return AnalysisMode::UniformInput;
  return margin.kind == Margin::Kind::None ? AnalysisMode::Pseudo : AnalysisMode::KnownMargins;
}

namespace {

std::vector<IntervalMethod> effective_methods(const AnalysisConfig& c) {
  if (!c.methods.empty()) return c.methods;
  if (c.mode() == AnalysisMode::Pseudo) return {IntervalMethod::Bootstrap};
  return {IntervalMethod::Asymptotic, IntervalMethod::Bonferroni};
}

bool uses_bootstrap(const AnalysisConfig& c) {
  const auto m = effective_methods(c);
  return std::find(m.begin(), m.end(), IntervalMethod::Bootstrap) != m.end();
}

std::string_view mode_name(AnalysisMode m) {
  switch (m) {
  case AnalysisMode::KnownMargins: return "known_margins";
  case AnalysisMode::Pseudo: return "pseudo";
  case AnalysisMode::UniformInput: return "uniform_input";
  }
  return "pseudo";
}

IntervalMethod method_from_string(const std::string& s) {
  if (s == "asymptotic") return IntervalMethod::Asymptotic;
  if (s == "bonferroni") return IntervalMethod::Bonferroni;
  if (s == "bootstrap") return IntervalMethod::Bootstrap;
  throw ConfigError("unknown interval method '" + s + "'");
}

} // namespace

void AnalysisConfig::validate() const {
  if (input.empty()) throw ConfigError("analysis: no input file");
  if (scale == Scale::Pseudo) throw ConfigError("analysis: input scale must be raw or uniform");
  if (scale != Scale::Raw && margin.kind != Margin::Kind::None)
    throw ConfigError("analysis: a margin applies only to raw input");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("analysis: level must lie in (0, 1)");
  if (u_grid != "jumps") (void)parse_u_grid(u_grid);
  if (uses_bootstrap(*this)) {
    if (!seed) throw ConfigError("analysis: bootstrap intervals require a seed");
    if (resamples < 1) throw ConfigError("analysis: resamples must be at least 1");
  }
  if (run_test) {
    if (test_m < 1) throw ConfigError("analysis: test m must be at least 1");
    if (!(test_u_max > 0.0 && test_u_max <= 0.5)) throw ConfigError("analysis: test u_max outside (0, 0.5]");
    if (!(test_size > 0.0 && test_size < 1.0)) throw ConfigError("analysis: test size must lie in (0, 1)");
  }
  if (threshold < 1) throw ConfigError("analysis: threshold must be at least 1");
  if (sigma3_resolution == 1) throw ConfigError("analysis: sigma3 resolution must be 0 or at least 2");
  if (!rho_weights.empty()) (void)parse_u_grid(rho_grid);
}

AnalysisConfig analysis_config_from_json(const json& raw) {
  const json& j = raw.contains("config") && raw.at("config").is_object() ? raw.at("config") : raw;
  if (!j.is_object()) throw ConfigError("analysis config must be a JSON object");
  AnalysisConfig c;
  try {
    c.input = j.value("input", std::string());
    const std::string scale = j.value("scale", std::string("raw"));
    if (scale == "raw") c.scale = Scale::Raw;
    else if (scale == "uniform") c.scale = Scale::Uniform;
    else throw ConfigError("analysis: scale must be raw or uniform");
    c.margin = Margin::parse(j.value("margin", std::string("none")));
    c.u_grid = j.value("u_grid", c.u_grid);
    c.level = j.value("level", c.level);
    for (const auto& m : j.value("methods", std::vector<std::string>{})) c.methods.push_back(method_from_string(m));
    c.resamples = j.value("resamples", c.resamples);
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("test")) {
      const json& t = j.at("test");
      c.run_test = t.value("enabled", true);
      c.test_m = t.value("m", c.test_m);
      c.test_u_max = t.value("u_max", c.test_u_max);
      c.test_size = t.value("size", c.test_size);
    }
    c.threshold = j.value("threshold", c.threshold);
    c.sigma3_resolution = j.value("sigma3_resolution", c.sigma3_resolution);
    if (j.contains("rho_weights")) {
      c.rho_weights.clear();
      for (const auto& w : j.at("rho_weights").get<std::vector<std::string>>()) c.rho_weights.push_back(parse_weight(w));
    }
    c.rho_grid = j.value("rho_grid", c.rho_grid);
    c.negate_rho = j.value("negate", c.negate_rho);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("analysis config: ") + e.what());
  }
  return c;
}

json analysis_config_to_json(const AnalysisConfig& c) {
  json methods = json::array();
  for (auto m : effective_methods(c)) methods.push_back(std::string(interval_method_name(m)));
  json weights = json::array();
  for (auto w : c.rho_weights) weights.push_back(std::string(weight_name(w)));
  json j = {{"input", c.input},
            {"scale", std::string(scale_name(c.scale))},
            {"margin", c.margin.spec()},
            {"u_grid", c.u_grid},
            {"level", c.level},
            {"methods", methods},
            {"resamples", c.resamples},
            {"test",
             {{"enabled", c.run_test}, {"m", c.test_m}, {"u_max", c.test_u_max}, {"size", c.test_size}}},
            {"threshold", c.threshold},
            {"sigma3_resolution", c.sigma3_resolution},
            {"rho_weights", weights},
            {"rho_grid", c.rho_grid},
            {"negate", c.negate_rho}};
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  return j;
}

void write_band_csv(std::ostream& os, const IntervalBand& band) {
  os << "u,alpha_hat,lower,upper,t_lower,t_upper,flags\n";
  const double n = static_cast<double>(band.n);
  for (std::size_t i = 0; i < band.size(); ++i)
    os << format_double(band.u[i]) << ',' << band.estimate[i].to_string() << ',' << band.lower[i].to_string()
       << ',' << band.upper[i].to_string() << ',' << format_double(static_cast<double>(band.count_lower[i]) / n)
       << ',' << format_double(static_cast<double>(band.count_upper[i]) / n) << ','
       << csv_field(band.flags[i]) << '\n';
}

json test_report_to_json(const TestReport& r) {
  return {{"statistic", r.statistic},
          {"reference", "chi-squared"},
          {"dof", r.dof},
          {"p_value", r.p_value},
          {"u_points", r.u_points},
          {"alpha_hat", r.alpha_hat},
          {"alpha_null", r.alpha_null},
          {"size", r.size},
          {"reject", r.reject}};
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write '" + p.string() + "'");
  return out;
}

} // namespace

json run_analysis(const AnalysisConfig& config, const std::string& out_dir) {
  config.validate();
  namespace fs = std::filesystem;
  const PairedSample input = read_pair_csv(config.input, config.scale);
  if (input.size() < 2) throw DataError("analysis: input needs at least 2 rows");

  PairedSample uniform;
  switch (config.mode()) {
  case AnalysisMode::KnownMargins:
    uniform.scale = Scale::Uniform;
    for (std::size_t i = 0; i < input.size(); ++i) {
      uniform.x1.push_back(config.margin.cdf(input.x1[i]));
      uniform.x2.push_back(config.margin.cdf(input.x2[i]));
    }
    break;
  case AnalysisMode::Pseudo: uniform = pseudo_observations(input); break;
  case AnalysisMode::UniformInput: uniform = input; break;
  }
  PairedSample raw = input;
  raw.scale = Scale::Raw;

  fs::create_directories(out_dir);
  const fs::path base(out_dir);
  std::vector<std::string> outputs;

  const TailCounter counter(uniform);
  const std::vector<double> grid = config.u_grid == "jumps" ? counter.jump_set() : parse_u_grid(config.u_grid);
  for (IntervalMethod m : effective_methods(config)) {
    IntervalBand band;
    switch (m) {
    case IntervalMethod::Asymptotic: band = ci_pointwise(uniform, grid, config.level); break;
    case IntervalMethod::Bonferroni: band = ci_bonferroni_on_grid(uniform, grid, config.level); break;
    case IntervalMethod::Bootstrap:
      band = ci_bootstrap(raw, grid, config.level, config.resamples, *config.seed);
      break;
    }
    const std::string name = "alpha_" + std::string(interval_method_name(m)) + ".csv";
    auto out = open_out(base / name);
    write_band_csv(out, band);
    outputs.push_back(name);
  }

  const auto u_min = u_min_rule(uniform, config.threshold);
  json summary = {{"n", uniform.size()}, {"mode", std::string(mode_name(config.mode()))}};
  summary["u_min"] = u_min ? json(*u_min) : json("none");
  summary["threshold"] = config.threshold;

  if (config.run_test) {
    json t;
    if (!u_min || !(*u_min < config.test_u_max)) {
      t = {{"status", "skipped"}, {"reason", "u_min not below u_max"}};
    } else {
      const auto pts = equispaced_points(*u_min, config.test_u_max, config.test_m);
      const std::vector<double> null(pts.size(), 0.0);
      try {
        t = test_report_to_json(chi2_test(uniform, pts, null, config.test_size));
        t["status"] = "ok";
      } catch (const NumericalError& e) {
        t = {{"status", "failed"}, {"reason", e.what()}, {"u_points", pts}};
      }
    }
    open_out(base / "test.json") << t.dump(2) << '\n';
    outputs.emplace_back("test.json");
  }

  if (config.sigma3_resolution >= 2) {
    const Sigma3Result s = sigma3_sample(uniform, config.sigma3_resolution);
    summary["sigma3"] = {{"value", s.value},
                         {"resolution", s.resolution},
                         {"spacing", s.spacing},
                         {"argmax", {s.argmax_u1, s.argmax_u2}}};
  }
  if (!config.rho_weights.empty()) {
    const auto rgrid = parse_u_grid(config.rho_grid);
    auto out = open_out(base / "rho_k.csv");
    bool header = true;
    for (WeightFunction w : config.rho_weights) {
      write_curve_csv(out, rho_k_curve(uniform, rgrid, w, config.negate_rho), header);
      header = false;
    }
    outputs.emplace_back("rho_k.csv");
  }
  open_out(base / "summary.json") << summary.dump(2) << '\n';
  outputs.emplace_back("summary.json");

  json manifest = {{"tool", "tailasym"},
                   {"version", kVersion},
                   {"command", "analyze"},
                   {"config", analysis_config_to_json(config)},
                   {"outputs", outputs}};
  open_out(base / "manifest.json") << manifest.dump(2) << '\n';
  return manifest;
}

} // namespace tailasym
