#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tailasym/analysis.hpp"
#include "tailasym/csv_io.hpp"
#include "tailasym/errors.hpp"
#include "tailasym/margins.hpp"
#include "tailasym/sampling.hpp"

using namespace tailasym;
using Catch::Matchers::WithinAbs;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("tailasym_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("known margins", "[io]") {
  const auto c = Margin::parse("cauchy(0,1)");
  CHECK(c.cdf(0.0) == 0.5);
  CHECK_THAT(c.cdf(1.0), WithinAbs(0.75, 1e-15));
  CHECK_THAT(c.cdf(-1.0), WithinAbs(0.25, 1e-15));
  CHECK_THAT(Margin::parse("cauchy(2,3)").cdf(5.0), WithinAbs(0.75, 1e-15));
  // Far tail keeps relative precision.
  CHECK_THAT(c.cdf(-1e12) * 1e12 * M_PI, WithinAbs(1.0, 1e-9));
  CHECK_THAT(Margin::parse("student_t(1e6)").cdf(1.6448536269514722), WithinAbs(0.95, 1e-5));
  CHECK_THAT(Margin::parse("student_t(1,0,1)").cdf(1.0), WithinAbs(0.75, 1e-12));
  CHECK_THAT(Margin::parse("normal(1,2)").cdf(1.0), WithinAbs(0.5, 1e-15));
  CHECK(Margin::parse("none").kind == Margin::Kind::None);
  CHECK_THROWS_AS(Margin::parse("student_t(-1)"), DomainError);
  CHECK_THROWS_AS(Margin::parse("normal(0,0)"), DomainError);
  CHECK_THROWS_AS(Margin::parse("cauchy(0,-2)"), DomainError);
  CHECK_THROWS(Margin::parse("weibull(1)"));
  CHECK(Margin::parse(Margin::parse("student_t(3,1,2)").spec()).spec() == Margin::parse("student_t(3,1,2)").spec());
}

TEST_CASE("pair CSV reading and writing", "[io]") {
  {
    std::istringstream in("x1,x2\r\n1.5,2\r\n-3,4e2\r\n\r\n");
    const auto s = read_pair_csv(in, Scale::Raw);
    CHECK(s.x1 == std::vector<double>{1.5, -3});
    CHECK(s.x2 == std::vector<double>{2, 400});
  }
  {
    std::istringstream in("0.1,0.2\n0.3,0.4\n");
    CHECK(read_pair_csv(in, Scale::Uniform).size() == 2);
  }
  {
    std::istringstream in("a,b\n0.1,0.2\n0.3,oops\n");
    try {
      read_pair_csv(in, Scale::Raw);
      FAIL("expected a data error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  {
    std::istringstream in("0.1,1.2\n");
    CHECK_THROWS_AS(read_pair_csv(in, Scale::Uniform), DataError);
  }
  {
    std::istringstream in("1,2,3\n");
    CHECK_THROWS_AS(read_pair_csv(in, Scale::Raw), DataError);
  }
  CHECK_THROWS_AS(read_pair_csv(std::string("/nonexistent/file.csv"), Scale::Raw), DataError);

  const auto s = sample_copula(CopulaModel::gumbel(1.7), 50, {2, 2});
  std::stringstream io;
  write_pair_csv(io, s);
  CHECK(io.str().rfind("u1,u2\n", 0) == 0);
  const auto back = read_pair_csv(io, Scale::Uniform);
  CHECK(back.x1 == s.x1);
  CHECK(back.x2 == s.x2);
}

TEST_CASE("known-margin and rank-based estimates converge together", "[analysis]") {
  const auto grid = parse_u_grid("0.05:0.5:0.05");
  auto sup_gap = [&](std::size_t n) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto raw = sample_clayton_cauchy(5.0, n, {600 + seed, 0});
      PairedSample uni;
      uni.scale = Scale::Uniform;
      for (std::size_t i = 0; i < n; ++i) {
        uni.x1.push_back(cauchy_cdf(raw.x1[i]));
        uni.x2.push_back(cauchy_cdf(raw.x2[i]));
      }
      double gap = 0.0;
      for (double u : grid) gap = std::max(gap, std::abs(alpha_hat(uni, u).value() - alpha_star(raw, u).value()));
      total += gap;
    }
    return total / 5.0;
  };
  CHECK(sup_gap(10000) < sup_gap(1000));
}

TEST_CASE("analysis pipeline and manifest round trip", "[analysis]") {
  const auto dir = scratch("analysis_in");
  const auto raw = sample_clayton_cauchy(20.0, 1500, {77, 0});
  {
    std::ofstream out(dir / "data.csv");
    write_pair_csv(out, raw);
  }
  AnalysisConfig cfg;
  cfg.input = (dir / "data.csv").string();
  cfg.margin = Margin::parse("cauchy(0,1)");
  cfg.sigma3_resolution = 100;
  CHECK(cfg.mode() == AnalysisMode::KnownMargins);
  const auto out1 = scratch("analysis_out1");
  const auto manifest = run_analysis(cfg, out1.string());
  for (const auto& name : manifest["outputs"]) CHECK(std::filesystem::exists(out1 / name.get<std::string>()));
  CHECK(slurp(out1 / "alpha_asymptotic.csv").rfind("u,alpha_hat,lower,upper,t_lower,t_upper,flags\n", 0) == 0);
  const auto test = nlohmann::json::parse(slurp(out1 / "test.json"));
  CHECK(test["status"] == "ok");
  const auto summary = nlohmann::json::parse(slurp(out1 / "summary.json"));
  CHECK(summary["n"] == 1500);
  CHECK(summary["mode"] == "known_margins");

  // Re-running from the manifest reproduces every output byte for byte.
  const auto cfg2 = analysis_config_from_json(manifest);
  const auto out2 = scratch("analysis_out2");
  run_analysis(cfg2, out2.string());
  for (const auto& name : manifest["outputs"]) {
    const auto f = name.get<std::string>();
    CHECK(slurp(out1 / f) == slurp(out2 / f));
  }

  AnalysisConfig pseudo = cfg;
  pseudo.margin = Margin::none();
  CHECK(pseudo.mode() == AnalysisMode::Pseudo);
  CHECK_THROWS_AS(pseudo.validate(), ConfigError);  // bootstrap without a seed
  pseudo.seed = 5;
  pseudo.resamples = 49;
  const auto m3 = run_analysis(pseudo, scratch("analysis_out3").string());
  CHECK(std::find(m3["outputs"].begin(), m3["outputs"].end(), "alpha_bootstrap.csv") != m3["outputs"].end());
}

TEST_CASE("identical columns", "[analysis]") {
  const auto dir = scratch("analysis_ident");
  {
    std::ofstream out(dir / "data.csv");
    out << "x1,x2\n";
    for (int i = 0; i < 200; ++i) out << i * 0.37 << ',' << i * 0.37 << '\n';
  }
  AnalysisConfig cfg;
  cfg.input = (dir / "data.csv").string();
  cfg.seed = 1;
  cfg.resamples = 19;
  cfg.sigma3_resolution = 50;
  const auto m = run_analysis(cfg, (dir / "out").string());
  CHECK(m["outputs"].size() >= 4);
  // Comonotone ranks put equal mass in both corners; the literal 1 - u threshold
  // can shift a count by one observation, never more.
  std::istringstream rows(slurp(dir / "out" / "alpha_bootstrap.csv"));
  std::string line;
  std::getline(rows, line);
  std::size_t checked = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    REQUIRE(f.size() >= 6);
    CHECK(std::abs(std::stod(f[4]) - std::stod(f[5])) <= 1.0 / 200 + 1e-15);
    ++checked;
  }
  CHECK(checked > 50);
}
