#pragma once

#include <span>
#include <vector>

#include "gvol/gamma.hpp"
#include "gvol/inference.hpp"
#include "gvol/rng.hpp"
#include "gvol/volatility.hpp"

namespace gvol {

/// Monotone series observed discretely in time: strictly increasing times
/// t_0 < ... < t_m, nondecreasing values with x_{t_0} = 0.
struct DiscreteObservations {
  std::vector<double> times;
  std::vector<double> values;

  void validate() const;
  std::size_t size() const { return times.size(); }
};

/// Observation interval bracketing the crossing of one level: the level
/// lies in [x_lo, x_hi) and tau in (t_lo, t_hi). Levels attained exactly
/// at an observation are `fixed` with tau pinned to that time.
struct Bracket {
  double level = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  bool fixed = false;
  double fixed_tau = 0.0;
};

/// Bracketing interval for every partition level; a level above the last
/// observation is an error.
std::vector<Bracket> bracket_crossings(const DiscreteObservations& obs,
                                       const BinPartition& partition);

/// Unnormalized log density of tau inside its bracket under the
/// unit-volatility reference law: the product of the two gamma transition
/// densities into and out of (tau, level).
double tau_log_density(double tau, const Bracket& bracket,
                       const GammaParams& p);

/// Inverse-CDF proposal for tau on a uniform grid over the bracket.
/// Piecewise-constant cells with masses proportional to the density at
/// cell midpoints; the returned log density is exact for the gridded
/// proposal, which keeps Metropolis-Hastings valid despite the
/// discretization.
class TauProposalGrid {
 public:
  TauProposalGrid(const Bracket& bracket, const GammaParams& p,
                  int grid_points);

  double sample(RngStream& rng) const;
  double log_density(double tau) const;
  const Bracket& bracket() const { return bracket_; }

 private:
  Bracket bracket_;
  double cell_width_ = 0.0;
  std::vector<double> log_cell_density_;  // log of q on each cell
  std::vector<double> cum_mass_;          // cumulative cell masses, last = 1
};

struct TauProposal {
  double tau = 0.0;
  double log_density = 0.0;
};

TauProposal propose_tau(const Bracket& bracket, const GammaParams& p,
                        int grid_points, RngStream& rng);

/// Exponent of the discrete-observation likelihood weight R:
///   beta * sum_k (1 - n/xi_k) * (b_k - b_{k-1})
///     - alpha * sum_k (tau_k - tau_{k-1}) * log(xi_k / n),
/// with tau_0 = 0. Only the second sum depends on tau.
double log_R(std::span<const double> taus, std::span<const double> xis,
             const BinPartition& partition, const GammaParams& p,
             long long n_scale);

/// log acceptance ratio of the independence MH step targeting f * R with
/// proposal q: [log f* + log R* - log q*] - [log f + log R - log q].
double mh_log_accept_ratio(double logf_new, double logR_new, double logq_new,
                           double logf_cur, double logR_cur, double logq_cur);

/// Augmented chain state: hitting times, per-bin volatility values, and
/// the cached log weight.
struct AugmentedState {
  std::vector<double> taus;
  std::vector<double> xis;
  double log_weight = 0.0;
};

/// tau at the bracket midpoint (or the pinned time), xi at the prior mean
/// when it exists (alpha_k > 1), otherwise the prior mode.
AugmentedState initial_state(const std::vector<Bracket>& brackets,
                             const BinPartition& partition,
                             const PriorSpec& prior, const GammaParams& p,
                             long long n_scale);

struct SweepCounters {
  std::vector<long long> proposed;
  std::vector<long long> accepted;
};

/// One Gibbs sweep: (i) independence-MH update of each non-fixed tau_k
/// inside its bracket, rejecting proposals that break the ordering when
/// brackets are shared; (ii) conjugate redraw of each xi_k from
/// IG(alpha*dtau_k + alpha_k, n*beta*db_k + beta_k). The state increment
/// over a bin is approximated by the bin width; the overshoot at each
/// level is neglected, in R and in the xi update alike.
void gibbs_sweep(AugmentedState& state, const std::vector<Bracket>& brackets,
                 const std::vector<TauProposalGrid>& proposals,
                 const BinPartition& partition, const PriorSpec& prior,
                 const GammaParams& p, long long n_scale, RngStream& rng,
                 SweepCounters* counters = nullptr,
                 bool update_xis = true);

/// Convenience overload matching the module contract: derives brackets and
/// proposal grids from the observations on the fly.
void gibbs_sweep(AugmentedState& state, const DiscreteObservations& obs,
                 const BinPartition& partition, const PriorSpec& prior,
                 const GammaParams& p, long long n_scale, int grid_points,
                 RngStream& rng, SweepCounters* counters = nullptr);

struct ChainConfig {
  long long iterations = 5000;
  long long burn_in = 1000;
  long long thin = 1;
  int grid_points = 256;
};

struct ChainResult {
  std::vector<std::vector<double>> xi_samples;   // [kept][K]
  std::vector<std::vector<double>> tau_samples;  // [kept][K]
  std::vector<long long> kept_iterations;        // 1-based sweep numbers
  std::vector<double> acceptance;                // per level, 1.0 if fixed
  std::vector<double> xi_mean;                   // posterior mean estimate
  std::vector<double> xi_sd;
};

/// Runs the data-augmentation chain. Requires every bin to contain at
/// least one observation (validated, clear error otherwise). Deterministic
/// under a fixed RngStream.
ChainResult run_chain(const DiscreteObservations& obs,
                      const BinPartition& partition, const PriorSpec& prior,
                      const GammaParams& p, long long n_scale,
                      const ChainConfig& config, RngStream& rng);

}  // namespace gvol
