#include <benchmark/benchmark.h>

#include "gvol/simulate.hpp"

namespace {

void BM_EulerHittingRecord(benchmark::State& state) {
  const long long n = state.range(0);
  const gvol::GammaParams p(1.0, 1.0);
  const auto part = gvol::equidistant_partition(10, 1.0);
  const auto vol = gvol::discretize_at_midpoints(
      gvol::make_test_volatility("sine", 1.0), part);
  const double dt =
      gvol::expected_bin_crossing_time(vol.max_value(), 0.1, p, n) / 1000.0;
  std::uint64_t rep = 0;
  for (auto _ : state) {
    gvol::RngStream rng(42, rep++);
    benchmark::DoNotOptimize(
        gvol::simulate_hitting_record(vol, p, n, dt, part, rng));
  }
}
BENCHMARK(BM_EulerHittingRecord)->Arg(125)->Arg(500)->Arg(2000)
    ->Unit(benchmark::kMillisecond);

void BM_EulerStepThroughput(benchmark::State& state) {
  const gvol::GammaParams p(1.0, 1.0);
  const auto part = gvol::equidistant_partition(1, 1e9);
  const gvol::PiecewiseVolatility vol(part, {1.0});
  gvol::RngStream rng(7, 0);
  std::uint64_t steps = 0;
  for (auto _ : state) {
    // One coarse path segment of ~1000 steps.
    auto path = gvol::euler_simulate(vol, p, 1, 1.0, 990.0, rng);
    steps += path.values.size() - 1;
    benchmark::DoNotOptimize(path);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_EulerStepThroughput);

}  // namespace
