#include <benchmark/benchmark.h>

#include "gvol/inference.hpp"
#include "gvol/mcmc.hpp"
#include "gvol/special.hpp"

namespace {

gvol::SufficientStats demo_stats(int K) {
  gvol::SufficientStats stats;
  stats.n_scale = 500;
  stats.process = gvol::GammaParams(1.0, 1.0);
  for (int k = 0; k < K; ++k) {
    stats.d_tau.push_back(30.0 + k);
    stats.d_x.push_back(0.1);
  }
  return stats;
}

void BM_PosteriorUpdate(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const auto stats = demo_stats(K);
  const auto prior = gvol::PriorSpec::constant(K, 0.1, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gvol::posterior(stats, prior));
  }
}
BENCHMARK(BM_PosteriorUpdate)->Arg(10)->Arg(100);

void BM_CredibleBand(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const auto post =
      gvol::posterior(demo_stats(K), gvol::PriorSpec::constant(K, 0.1, 0.1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gvol::credible_band(post, 0.9));
  }
  state.SetItemsProcessed(state.iterations() * K * 2);
}
BENCHMARK(BM_CredibleBand)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_GammaQuantile(benchmark::State& state) {
  double q = 0.049;
  for (auto _ : state) {
    q = q < 0.95 ? q + 1e-7 : 0.049;
    benchmark::DoNotOptimize(gvol::gamma_quantile(33.1, q));
  }
}
BENCHMARK(BM_GammaQuantile);

void BM_GibbsSweep(benchmark::State& state) {
  const gvol::GammaParams p(1.0, 1.0);
  const auto part = gvol::equidistant_partition(5, 0.5);
  std::vector<gvol::Bracket> brackets;
  std::vector<gvol::TauProposalGrid> proposals;
  for (int k = 1; k <= 5; ++k) {
    gvol::Bracket b;
    b.level = part.upper(k);
    b.t_lo = 10.0 * (k - 1);
    b.t_hi = 10.0 * k;
    b.x_lo = b.level - 0.08;
    b.x_hi = b.level + 0.02;
    brackets.push_back(b);
    proposals.emplace_back(b, p, 256);
  }
  const auto prior = gvol::PriorSpec::constant(5, 0.5, 0.5);
  auto st = gvol::initial_state(brackets, part, prior, p, 100);
  gvol::RngStream rng(11, 0);
  for (auto _ : state) {
    gvol::gibbs_sweep(st, brackets, proposals, part, prior, p, 100, rng);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_GibbsSweep);

}  // namespace
