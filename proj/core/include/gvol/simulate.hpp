#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gvol/gamma.hpp"
#include "gvol/rng.hpp"
#include "gvol/volatility.hpp"

namespace gvol {

inline constexpr std::uint64_t kDefaultMaxSteps = 100'000'000;

/// Euler grid path of the scaled SDE dX = sigma(X-) dL / n: values[i] is
/// the state at time i*dt, nondecreasing and starting at 0.
struct SimulatedPath {
  double dt = 0.0;
  std::vector<double> values;
};

/// Grid-snapped first-passage data per level k = 1..K: tau[k-1] is the
/// first grid time with X >= b_k, x_at_tau the state there, and
/// overshoot = x_at_tau - b_k.
struct HittingRecord {
  std::vector<double> tau;
  std::vector<double> x_at_tau;
  std::vector<double> overshoot;

  std::size_t size() const { return tau.size(); }
};

/// Euler scheme for dX = sigma(X-) dL / n_scale with gamma increments
/// Gamma(alpha*dt, beta): X_{i+1} = X_i + sigma(X_i) * G_i / n_scale.
/// Because sigma is constant within a bin the grid path is exact in law
/// inside bins; the only discretization effect is grid snapping at bin
/// crossings. Runs until the first grid time with X >= stop_level and
/// returns the whole path including the crossing point. Exceeding
/// max_steps throws BudgetExceededError, never truncates silently.
SimulatedPath euler_simulate(const std::function<double(double)>& sigma,
                             const GammaParams& p, long long n_scale,
                             double dt, double stop_level, RngStream& rng,
                             std::uint64_t max_steps = kDefaultMaxSteps);

/// Overload validating stop_level against the volatility's domain [0, b_K].
SimulatedPath euler_simulate(const PiecewiseVolatility& v,
                             const GammaParams& p, long long n_scale,
                             double dt, double stop_level, RngStream& rng,
                             std::uint64_t max_steps = kDefaultMaxSteps);

/// Streaming form of the same stepping loop: on_step(i, x) sees every grid
/// point after the start, including the crossing point, without storing
/// the path. Identical draws to euler_simulate under the same stream.
void euler_stream(const std::function<double(double)>& sigma,
                  const GammaParams& p, long long n_scale, double dt,
                  double stop_level, RngStream& rng, std::uint64_t max_steps,
                  const std::function<void(std::uint64_t, double)>& on_step);

/// First-passage times over the partition levels, scanned from a stored
/// path; the path must reach the last level. Idempotent, and values after
/// the final crossing are ignored.
HittingRecord hitting_times(const SimulatedPath& path,
                            const BinPartition& partition);

/// Streaming equivalent of euler_simulate + hitting_times: identical
/// draws and identical record, without storing the path.
HittingRecord simulate_hitting_record(
    const std::function<double(double)>& sigma, const GammaParams& p,
    long long n_scale, double dt, const BinPartition& partition,
    RngStream& rng, std::uint64_t max_steps = kDefaultMaxSteps);
HittingRecord simulate_hitting_record(
    const PiecewiseVolatility& v, const GammaParams& p, long long n_scale,
    double dt, const BinPartition& partition, RngStream& rng,
    std::uint64_t max_steps = kDefaultMaxSteps);

/// Mean passage time of one bin of width delta_b at constant volatility:
/// n * delta_b * beta / (alpha * sigma).
double expected_bin_crossing_time(double sigma, double delta_b,
                                  const GammaParams& p, long long n_scale);

/// Closed-form lower bound for P(overshoot < delta):
/// b_K / (b_K + delta) * (1 - exp(-n*delta*beta / sigma_star)).
double overshoot_lower_bound(double b_K, double delta, long long n_scale,
                             double beta, double sigma_star);

struct ConcentrationReport {
  long long n_scale = 0;
  int replicates = 0;
  double dt = 0.0;
  double theoretical_dtau = 0.0;   // n*db*beta/(alpha*sigma)
  double mean_dtau = 0.0;
  double sd_dtau = 0.0;
  double relative_error = 0.0;     // |mean/theoretical - 1|
  double cv = 0.0;                 // sd/mean
};

/// Monte-Carlo check of the bin passage-time concentration: simulates
/// first passage of a single constant-volatility bin `replicates` times.
/// dt <= 0 selects the default rule dt = theoretical_dtau / 1000.
ConcentrationReport verify_hitting_concentration(
    double sigma_k, double delta_b, const GammaParams& p, long long n_scale,
    int replicates, RngStream& rng, double dt = 0.0, unsigned threads = 1);

struct OvershootReport {
  long long n_scale = 0;
  int replicates = 0;
  double delta = 0.0;
  double sigma_star = 0.0;
  double bound = 0.0;                 // closed-form lower bound, all levels
  std::vector<double> empirical;      // per level, P(overshoot < delta)
  std::vector<double> standard_error; // per level, binomial MC error
};

/// Monte-Carlo check of the overshoot bound over a full partition.
/// dt <= 0 selects a step with expected increment delta/50.
OvershootReport verify_overshoot_bound(const PiecewiseVolatility& v,
                                       const GammaParams& p, long long n_scale,
                                       double delta, int replicates,
                                       RngStream& rng, double dt = 0.0,
                                       unsigned threads = 1);

}  // namespace gvol
