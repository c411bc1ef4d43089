#include "gvol/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gvol/errors.hpp"
#include "gvol/parallel.hpp"

namespace gvol {

namespace {

void validate_step_args(long long n_scale, double dt, double stop_level) {
  if (n_scale < 1) {
    throw std::domain_error("euler_simulate: n_scale must be >= 1");
  }
  if (!(dt > 0.0)) {
    throw std::domain_error("euler_simulate: dt must be positive");
  }
  if (!(stop_level > 0.0)) {
    throw std::domain_error("euler_simulate: stop_level must be positive");
  }
}

// Shared stepping loop. on_step(i, x) sees every grid point after the
// start, including the crossing point; returns after the first x >= stop.
template <class Sigma, class OnStep>
void euler_loop(const Sigma& sigma, const GammaParams& p, long long n_scale,
                double dt, double stop_level, RngStream& rng,
                std::uint64_t max_steps, OnStep&& on_step) {
  const double inv_n = 1.0 / static_cast<double>(n_scale);
  double x = 0.0;
  for (std::uint64_t i = 1; i <= max_steps; ++i) {
    const double g = sample_standard_gamma(p.alpha * dt, rng) / p.beta;
    x += sigma(x) * g * inv_n;
    on_step(i, x);
    if (x >= stop_level) return;
  }
  throw BudgetExceededError(
      "euler_simulate: step budget of " + std::to_string(max_steps) +
      " exceeded before reaching level " + std::to_string(stop_level));
}

}  // namespace

SimulatedPath euler_simulate(const std::function<double(double)>& sigma,
                             const GammaParams& p, long long n_scale,
                             double dt, double stop_level, RngStream& rng,
                             std::uint64_t max_steps) {
  validate_step_args(n_scale, dt, stop_level);
  SimulatedPath path;
  path.dt = dt;
  path.values.push_back(0.0);
  euler_loop(sigma, p, n_scale, dt, stop_level, rng, max_steps,
             [&](std::uint64_t, double x) { path.values.push_back(x); });
  return path;
}

SimulatedPath euler_simulate(const PiecewiseVolatility& v,
                             const GammaParams& p, long long n_scale,
                             double dt, double stop_level, RngStream& rng,
                             std::uint64_t max_steps) {
  if (stop_level > v.partition().upper_end()) {
    throw std::domain_error(
        "euler_simulate: stop_level exceeds the volatility domain b_K");
  }
  validate_step_args(n_scale, dt, stop_level);
  SimulatedPath path;
  path.dt = dt;
  path.values.push_back(0.0);
  const auto sigma = [&v](double x) { return v.evaluate(x); };
  euler_loop(sigma, p, n_scale, dt, stop_level, rng, max_steps,
             [&](std::uint64_t, double x) { path.values.push_back(x); });
  return path;
}

void euler_stream(const std::function<double(double)>& sigma,
                  const GammaParams& p, long long n_scale, double dt,
                  double stop_level, RngStream& rng, std::uint64_t max_steps,
                  const std::function<void(std::uint64_t, double)>& on_step) {
  validate_step_args(n_scale, dt, stop_level);
  euler_loop(sigma, p, n_scale, dt, stop_level, rng, max_steps, on_step);
}

HittingRecord hitting_times(const SimulatedPath& path,
                            const BinPartition& partition) {
  if (!(path.dt > 0.0) || path.values.empty()) {
    throw std::domain_error("hitting_times: empty path");
  }
  const int K = partition.size();
  HittingRecord rec;
  rec.tau.reserve(static_cast<std::size_t>(K));
  rec.x_at_tau.reserve(static_cast<std::size_t>(K));
  rec.overshoot.reserve(static_cast<std::size_t>(K));
  std::size_t i = 0;
  for (int k = 1; k <= K; ++k) {
    const double level = partition.upper(k);
    while (i < path.values.size() && path.values[i] < level) ++i;
    if (i == path.values.size()) {
      throw std::domain_error("hitting_times: path never reaches level b_" +
                              std::to_string(k) + " = " +
                              std::to_string(level));
    }
    rec.tau.push_back(static_cast<double>(i) * path.dt);
    rec.x_at_tau.push_back(path.values[i]);
    rec.overshoot.push_back(path.values[i] - level);
  }
  return rec;
}

namespace {

template <class Sigma>
HittingRecord streaming_record(const Sigma& sigma, const GammaParams& p,
                               long long n_scale, double dt,
                               const BinPartition& partition, RngStream& rng,
                               std::uint64_t max_steps) {
  validate_step_args(n_scale, dt, partition.upper_end());
  const int K = partition.size();
  HittingRecord rec;
  rec.tau.reserve(static_cast<std::size_t>(K));
  rec.x_at_tau.reserve(static_cast<std::size_t>(K));
  rec.overshoot.reserve(static_cast<std::size_t>(K));
  int next_level = 1;
  euler_loop(sigma, p, n_scale, dt, partition.upper_end(), rng, max_steps,
             [&](std::uint64_t i, double x) {
               while (next_level <= K && x >= partition.upper(next_level)) {
                 rec.tau.push_back(static_cast<double>(i) * dt);
                 rec.x_at_tau.push_back(x);
                 rec.overshoot.push_back(x - partition.upper(next_level));
                 ++next_level;
               }
             });
  return rec;
}

}  // namespace

HittingRecord simulate_hitting_record(
    const std::function<double(double)>& sigma, const GammaParams& p,
    long long n_scale, double dt, const BinPartition& partition,
    RngStream& rng, std::uint64_t max_steps) {
  return streaming_record(sigma, p, n_scale, dt, partition, rng, max_steps);
}

HittingRecord simulate_hitting_record(const PiecewiseVolatility& v,
                                      const GammaParams& p, long long n_scale,
                                      double dt, const BinPartition& partition,
                                      RngStream& rng,
                                      std::uint64_t max_steps) {
  if (partition.upper_end() > v.partition().upper_end()) {
    throw std::domain_error(
        "simulate_hitting_record: levels exceed the volatility domain b_K");
  }
  const auto sigma = [&v](double x) { return v.evaluate(x); };
  return streaming_record(sigma, p, n_scale, dt, partition, rng, max_steps);
}

double expected_bin_crossing_time(double sigma, double delta_b,
                                  const GammaParams& p, long long n_scale) {
  if (!(sigma > 0.0) || !(delta_b > 0.0) || n_scale < 1) {
    throw std::domain_error("expected_bin_crossing_time: invalid arguments");
  }
  return static_cast<double>(n_scale) * delta_b * p.beta / (p.alpha * sigma);
}

double overshoot_lower_bound(double b_K, double delta, long long n_scale,
                             double beta, double sigma_star) {
  if (!(b_K > 0.0) || !(delta > 0.0) || n_scale < 1 || !(beta > 0.0) ||
      !(sigma_star > 0.0)) {
    throw std::domain_error("overshoot_lower_bound: invalid arguments");
  }
  return b_K / (b_K + delta) *
         (1.0 - std::exp(-static_cast<double>(n_scale) * delta * beta /
                         sigma_star));
}

ConcentrationReport verify_hitting_concentration(
    double sigma_k, double delta_b, const GammaParams& p, long long n_scale,
    int replicates, RngStream& rng, double dt, unsigned threads) {
  if (replicates < 2) {
    throw std::domain_error(
        "verify_hitting_concentration: need at least 2 replicates");
  }
  ConcentrationReport rep;
  rep.n_scale = n_scale;
  rep.replicates = replicates;
  rep.theoretical_dtau =
      expected_bin_crossing_time(sigma_k, delta_b, p, n_scale);
  rep.dt = dt > 0.0 ? dt : rep.theoretical_dtau / 1000.0;

  const BinPartition bin({0.0, delta_b});
  const std::vector<double> values{sigma_k};
  const PiecewiseVolatility vol(bin, values);
  const auto taus = run_replicates(
      static_cast<std::size_t>(replicates), threads, [&](std::size_t i) {
        RngStream stream = rng.child(i);
        return simulate_hitting_record(vol, p, n_scale, rep.dt, bin, stream)
            .tau[0];
      });

  double sum = 0.0;
  for (double t : taus) sum += t;
  rep.mean_dtau = sum / replicates;
  double ss = 0.0;
  for (double t : taus) ss += (t - rep.mean_dtau) * (t - rep.mean_dtau);
  rep.sd_dtau = std::sqrt(ss / (replicates - 1));
  rep.relative_error = std::abs(rep.mean_dtau / rep.theoretical_dtau - 1.0);
  rep.cv = rep.sd_dtau / rep.mean_dtau;
  return rep;
}

OvershootReport verify_overshoot_bound(const PiecewiseVolatility& v,
                                       const GammaParams& p, long long n_scale,
                                       double delta, int replicates,
                                       RngStream& rng, double dt,
                                       unsigned threads) {
  if (replicates < 1) {
    throw std::domain_error("verify_overshoot_bound: need replicates >= 1");
  }
  if (!(delta > 0.0)) {
    throw std::domain_error("verify_overshoot_bound: delta must be positive");
  }
  const auto& partition = v.partition();
  const int K = partition.size();
  OvershootReport rep;
  rep.n_scale = n_scale;
  rep.replicates = replicates;
  rep.delta = delta;
  rep.sigma_star = v.max_value();
  rep.bound = overshoot_lower_bound(partition.upper_end(), delta, n_scale,
                                    p.beta, rep.sigma_star);
  // Keep the expected per-step increment well below delta so grid snapping
  // does not contaminate the overshoot.
  rep.empirical.assign(static_cast<std::size_t>(K), 0.0);
  rep.standard_error.assign(static_cast<std::size_t>(K), 0.0);
  const double auto_dt = delta * static_cast<double>(n_scale) * p.beta /
                         (50.0 * p.alpha * rep.sigma_star);
  const double step = dt > 0.0 ? dt : auto_dt;

  const auto records = run_replicates(
      static_cast<std::size_t>(replicates), threads, [&](std::size_t i) {
        RngStream stream = rng.child(i);
        return simulate_hitting_record(v, p, n_scale, step, partition, stream);
      });
  for (const auto& rec : records) {
    for (int k = 0; k < K; ++k) {
      if (rec.overshoot[static_cast<std::size_t>(k)] < delta) {
        rep.empirical[static_cast<std::size_t>(k)] += 1.0;
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    const double phat = rep.empirical[static_cast<std::size_t>(k)] / replicates;
    rep.empirical[static_cast<std::size_t>(k)] = phat;
    rep.standard_error[static_cast<std::size_t>(k)] =
        std::sqrt(phat * (1.0 - phat) / replicates);
  }
  return rep;
}

}  // namespace gvol
