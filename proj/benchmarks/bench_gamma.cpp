#include <benchmark/benchmark.h>

#include <array>

#include "gvol/gamma.hpp"
#include "gvol/rng.hpp"

namespace {

void BM_SampleIncrement(benchmark::State& state) {
  const double shape = state.range(0) / 1000.0;
  gvol::RngStream rng(1, 0);
  const gvol::GammaParams p(1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gvol::sample_increment(p, shape, rng));
  }
}
BENCHMARK(BM_SampleIncrement)->Arg(100)->Arg(1000)->Arg(50000);

void BM_SampleLogGammaTinyShape(benchmark::State& state) {
  gvol::RngStream rng(2, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gvol::sample_log_standard_gamma(1e-4, rng));
  }
}
BENCHMARK(BM_SampleLogGammaTinyShape);

void BM_SampleBridge(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  std::vector<double> grid(static_cast<std::size_t>(points) + 1);
  for (int i = 0; i <= points; ++i) {
    grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / points;
  }
  gvol::RngStream rng(3, 0);
  const gvol::GammaParams p(1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gvol::sample_bridge(p, grid, 1.0, rng));
  }
  state.SetItemsProcessed(state.iterations() * points);
}
BENCHMARK(BM_SampleBridge)->Arg(16)->Arg(256);

void BM_TransitionLogdensity(benchmark::State& state) {
  const gvol::GammaParams p(0.01, 0.75);
  double elapsed = 49.0;
  for (auto _ : state) {
    elapsed = elapsed < 51.0 ? elapsed + 1e-6 : 49.0;
    benchmark::DoNotOptimize(gvol::transition_logdensity(p, elapsed, 0.1));
  }
}
BENCHMARK(BM_TransitionLogdensity);

}  // namespace

BENCHMARK_MAIN();
