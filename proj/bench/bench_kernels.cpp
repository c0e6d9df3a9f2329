// Serial reference versus OpenMP kernels. Run with OMP_NUM_THREADS set to the
// core count of interest; on a single core both variants should be close.

#include <benchmark/benchmark.h>

#include <vector>

#include "tailasym/estimation.hpp"
#include "tailasym/sampling.hpp"
#include "tailasym/tail_measures.hpp"

using namespace tailasym;

namespace {

const PairedSample& cauchy_sample(std::size_t n) {
  static std::vector<std::pair<std::size_t, PairedSample>> cache;
  for (const auto& [k, s] : cache)
    if (k == n) return s;
  cache.emplace_back(n, sample_clayton_cauchy(20.0, n, {1, 0}));
  return cache.back().second;
}

void bootstrap(benchmark::State& state, Execution exec) {
  const auto& raw = cauchy_sample(static_cast<std::size_t>(state.range(0)));
  const auto grid = parse_u_grid("0.01:0.5:0.01");
  for (auto _ : state) {
    auto reps = bootstrap_replicates(raw, grid, 199, 7, 0, exec);
    benchmark::DoNotOptimize(reps.data());
  }
  state.SetItemsProcessed(state.iterations() * 199);
}

void sigma3_kernel(benchmark::State& state, Execution exec) {
  const auto model = CopulaModel::clayton(2.0);
  for (auto _ : state) {
    auto r = sigma3(model, static_cast<std::size_t>(state.range(0)), exec);
    benchmark::DoNotOptimize(r.value);
  }
}

} // namespace

BENCHMARK_CAPTURE(bootstrap, serial, Execution::Serial)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bootstrap, parallel, Execution::Parallel)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sigma3_kernel, serial, Execution::Serial)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sigma3_kernel, parallel, Execution::Parallel)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
