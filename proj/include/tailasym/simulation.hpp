#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tailasym/copula.hpp"
#include "tailasym/estimation.hpp"
#include "tailasym/extended_real.hpp"
#include "tailasym/rng.hpp"

namespace tailasym {

/// Multi-point chi-squared test run inside every replication.
struct Chi2Config {
  std::vector<double> u_points;  // explicit points; when empty, m points on [u_min, u_max]
  std::size_t m = 11;
  double u_max = 0.1;
  std::size_t threshold = 30;    // corner-count threshold behind u_min
  double size = 0.1;
  bool null_is_truth = false;    // false: H0 alpha = 0; true: H0 alpha = population curve
};

/// Data-generating model of a scenario: a copula on the uniform scale, or the
/// Clayton copula with standard Cauchy margins ("clayton-cauchy:theta=...").
struct ScenarioModel {
  CopulaModel copula = CopulaModel::independence();
  bool cauchy_margins = false;

  static ScenarioModel parse(std::string_view spec);
  std::string spec() const;
};

struct Scenario {
  std::string name = "scenario";
  std::string model = "independence";
  std::size_t n = 2000;
  std::size_t replications = 500;
  std::vector<double> u_grid;
  std::vector<double> levels{0.9};
  std::vector<IntervalMethod> methods{IntervalMethod::Asymptotic};
  std::size_t resamples = 199;
  std::uint64_t master_seed = 1;
  std::optional<Chi2Config> chi2;
  double band_u_lower = 0.05;   // jump points in [band_u_lower, band_u_upper] enter the
  double band_u_upper = 0.5;    // simultaneous Bonferroni coverage

  /// Throws ConfigError before any work when a field is invalid.
  void validate() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

/// Named presets: "desk" (n = 2000, 500 replications, 199 resamples) and
/// "full" (n = 10^4, 999 resamples), both Clayton-Cauchy theta = 20.
Scenario scenario_preset(std::string_view name);

struct IntervalSummary {
  IntervalMethod method = IntervalMethod::Asymptotic;
  double level = 0.9;
  double u = 0.0;
  std::size_t replications = 0;
  std::size_t covered = 0;
  std::size_t bounded = 0;       // both ends finite
  double mean_width = 0.0;       // over bounded intervals
  std::size_t nonfinite_replicates = 0;  // bootstrap only, summed over replications
  double coverage() const { return replications ? static_cast<double>(covered) / static_cast<double>(replications) : 0.0; }
};

struct EstimateSummary {
  double u = 0.0;
  ExtendedReal truth;
  std::size_t replications = 0;
  double mean_alpha_hat = 0.0;        // over finite estimates
  double mean_abs_error_hat = 0.0;
  std::size_t nonfinite_hat = 0;
  double mean_alpha_star = 0.0;
  double mean_abs_error_star = 0.0;
  std::size_t nonfinite_star = 0;
};

struct SimultaneousSummary {
  double level = 0.9;
  std::size_t replications = 0;
  std::size_t covered = 0;
  double mean_points = 0.0;  // jump points inside the range, averaged
  double coverage() const { return replications ? static_cast<double>(covered) / static_cast<double>(replications) : 0.0; }
};

struct Chi2Summary {
  std::size_t replications = 0;
  std::size_t rejections = 0;
  std::size_t failures = 0;   // u_min unreachable or singular covariance; counted as non-rejections
  double mean_statistic = 0.0;
  double mean_u_min = 0.0;
  double rejection_rate() const { return replications ? static_cast<double>(rejections) / static_cast<double>(replications) : 0.0; }
};

/// Replication 0 on the grid, kept whole for plotting a single realization.
struct Realization {
  std::vector<double> u;
  std::vector<ExtendedReal> truth, alpha_hat, alpha_star;
  std::vector<ExtendedReal> asym_lower, asym_upper, boot_lower, boot_upper;
};

struct SimulationReport {
  Scenario scenario;
  std::vector<EstimateSummary> estimates;
  std::vector<IntervalSummary> intervals;
  std::vector<SimultaneousSummary> simultaneous;
  std::optional<Chi2Summary> chi2;
  Realization realization;   // replication 0
  double seconds = 0.0;      // wall time; kept out of report.json

  nlohmann::json to_json() const;
  /// Writes report.json, estimates.csv, intervals.csv, realization.csv and runtime.json.
  void write(const std::string& dir) const;
};

SimulationReport run_scenario(const Scenario& scenario);

struct SamplerDiagnostics {
  std::string model;
  std::size_t n = 0;
  double diagonal_deviation = 0.0;   // sup_u |C_n(u,u) - C(u,u)|
  double survival_deviation = 0.0;   // sup_u |upper-corner frequency - model value|
  double dkw_bound = 0.0;            // sqrt(log(2/0.01) / (2n))
  double margin_ks[2] = {0.0, 0.0};
  double margin_ks_pvalue[2] = {1.0, 1.0};
  std::vector<double> lambda_u;      // small u for the tail-dependence proxies
  std::vector<double> lambda_lower_empirical, lambda_upper_empirical;
  std::vector<double> lambda_lower_model, lambda_upper_model;

  nlohmann::json to_json() const;
};

SamplerDiagnostics sampler_diagnostics(const CopulaModel& model, std::size_t n, SeedSpec seed);

/// {"+inf"/"-inf" string or number} for JSON output.
nlohmann::json extended_to_json(const ExtendedReal& v);

} // namespace tailasym
