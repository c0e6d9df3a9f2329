#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailasym/estimation.hpp"
#include "tailasym/margins.hpp"
#include "tailasym/paired_sample.hpp"
#include "tailasym/tail_measures.hpp"

namespace tailasym {

/// How raw observations reach the copula scale.
enum class AnalysisMode { KnownMargins, Pseudo, UniformInput };

struct AnalysisConfig {
  std::string input;
  Scale scale = Scale::Raw;              // declared scale of the input file
  Margin margin;                          // kind None on raw input selects pseudo mode
  std::string u_grid = "jumps";           // "jumps" or a grid spec for the estimate tables
  double level = 0.9;
  std::vector<IntervalMethod> methods;    // empty: asymptotic+bonferroni, or bootstrap in pseudo mode
  std::size_t resamples = 999;
  std::optional<std::uint64_t> seed;      // required when bootstrap runs
  // chi-squared test on m equispaced points of [u_min, u_max]
  bool run_test = true;
  std::size_t test_m = 11;
  double test_u_max = 0.1;
  std::size_t threshold = 30;
  double test_size = 0.1;
  // comparison measures
  std::size_t sigma3_resolution = 400;    // 0 disables
  std::vector<WeightFunction> rho_weights{WeightFunction::X, WeightFunction::X2, WeightFunction::X4};
  std::string rho_grid = "0.01:0.5:0.01";
  bool negate_rho = false;

  AnalysisMode mode() const;
  void validate() const;
};

AnalysisConfig analysis_config_from_json(const nlohmann::json& j);
nlohmann::json analysis_config_to_json(const AnalysisConfig& c);

/// `u,alpha_hat,lower,upper,t_lower,t_upper,flags` rows of a band.
void write_band_csv(std::ostream& os, const IntervalBand& band);

nlohmann::json test_report_to_json(const TestReport& r);

/// Runs the full pipeline on `config.input` and writes the tables plus
/// manifest.json into `out_dir`. Returns the manifest.
nlohmann::json run_analysis(const AnalysisConfig& config, const std::string& out_dir);

} // namespace tailasym
