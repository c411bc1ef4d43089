#include "gvol/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gvol/errors.hpp"

namespace gvol {

void DiscreteObservations::validate() const {
  if (times.size() < 2 || times.size() != values.size()) {
    throw std::domain_error(
        "DiscreteObservations: need matching times/values with >= 2 points");
  }
  if (values.front() != 0.0) {
    throw std::domain_error("DiscreteObservations: first value must be 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::domain_error(
          "DiscreteObservations: times must be strictly increasing");
    }
    if (values[i] < values[i - 1]) {
      throw std::domain_error(
          "DiscreteObservations: values must be nondecreasing");
    }
  }
}

std::vector<Bracket> bracket_crossings(const DiscreteObservations& obs,
                                       const BinPartition& partition) {
  obs.validate();
  std::vector<Bracket> brackets;
  brackets.reserve(static_cast<std::size_t>(partition.size()));
  for (int k = 1; k <= partition.size(); ++k) {
    const double level = partition.upper(k);
    const auto it =
        std::lower_bound(obs.values.begin(), obs.values.end(), level);
    if (it == obs.values.end()) {
      throw std::domain_error(
          "bracket_crossings: level b_" + std::to_string(k) + " = " +
          std::to_string(level) + " lies above the last observation");
    }
    const std::size_t j = static_cast<std::size_t>(it - obs.values.begin());
    Bracket b;
    b.level = level;
    if (obs.values[j] == level) {
      // Level attained exactly at an observation: tau is pinned there.
      b.fixed = true;
      b.fixed_tau = obs.times[j];
      b.t_lo = b.t_hi = obs.times[j];
      b.x_lo = b.x_hi = level;
    } else {
      b.t_lo = obs.times[j - 1];
      b.t_hi = obs.times[j];
      b.x_lo = obs.values[j - 1];
      b.x_hi = obs.values[j];
    }
    brackets.push_back(b);
  }
  return brackets;
}

double tau_log_density(double tau, const Bracket& bracket,
                       const GammaParams& p) {
  if (bracket.fixed) {
    throw std::domain_error("tau_log_density: bracket is degenerate (fixed tau)");
  }
  if (!(tau > bracket.t_lo && tau < bracket.t_hi)) {
    throw std::domain_error(
        "tau_log_density: tau must lie strictly inside the bracket");
  }
  return transition_logdensity(p, tau - bracket.t_lo,
                               bracket.level - bracket.x_lo) +
         transition_logdensity(p, bracket.t_hi - tau,
                               bracket.x_hi - bracket.level);
}

TauProposalGrid::TauProposalGrid(const Bracket& bracket, const GammaParams& p,
                                 int grid_points)
    : bracket_(bracket) {
  if (bracket.fixed) return;  // point mass at fixed_tau
  if (grid_points < 16) {
    throw std::domain_error("TauProposalGrid: grid_points must be >= 16");
  }
  const double width = bracket.t_hi - bracket.t_lo;
  cell_width_ = width / grid_points;
  std::vector<double> logf(static_cast<std::size_t>(grid_points));
  double log_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double mid = bracket.t_lo + (i + 0.5) * cell_width_;
    logf[static_cast<std::size_t>(i)] = tau_log_density(mid, bracket, p);
    log_max = std::max(log_max, logf[static_cast<std::size_t>(i)]);
  }
  if (!std::isfinite(log_max)) {
    throw NumericalError(
        "TauProposalGrid: all grid densities underflowed; observations "
        "bracket the level too tightly, refine the bracketing");
  }
  double total = 0.0;
  std::vector<double> mass(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    mass[static_cast<std::size_t>(i)] =
        std::exp(logf[static_cast<std::size_t>(i)] - log_max);
    total += mass[static_cast<std::size_t>(i)];
  }
  const double log_total = std::log(total) + log_max;
  log_cell_density_.resize(static_cast<std::size_t>(grid_points));
  cum_mass_.resize(static_cast<std::size_t>(grid_points));
  double cum = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    log_cell_density_[static_cast<std::size_t>(i)] =
        logf[static_cast<std::size_t>(i)] - log_total - std::log(cell_width_);
    cum += mass[static_cast<std::size_t>(i)] / total;
    cum_mass_[static_cast<std::size_t>(i)] = cum;
  }
  cum_mass_.back() = 1.0;
}

double TauProposalGrid::sample(RngStream& rng) const {
  if (bracket_.fixed) return bracket_.fixed_tau;
  const double u = rng.uniform();
  const auto it = std::lower_bound(cum_mass_.begin(), cum_mass_.end(), u);
  const std::size_t cell = static_cast<std::size_t>(it - cum_mass_.begin());
  const double below = cell == 0 ? 0.0 : cum_mass_[cell - 1];
  const double frac = (u - below) / (cum_mass_[cell] - below);
  double tau =
      bracket_.t_lo + (static_cast<double>(cell) + frac) * cell_width_;
  // Clamp away from the endpoints; the density is defined on the open bracket.
  tau = std::min(std::max(tau, std::nextafter(bracket_.t_lo, bracket_.t_hi)),
                 std::nextafter(bracket_.t_hi, bracket_.t_lo));
  return tau;
}

double TauProposalGrid::log_density(double tau) const {
  if (bracket_.fixed) return 0.0;
  if (!(tau > bracket_.t_lo && tau < bracket_.t_hi)) {
    throw std::domain_error("TauProposalGrid: tau outside the bracket");
  }
  auto cell = static_cast<std::size_t>((tau - bracket_.t_lo) / cell_width_);
  cell = std::min(cell, log_cell_density_.size() - 1);
  return log_cell_density_[cell];
}

TauProposal propose_tau(const Bracket& bracket, const GammaParams& p,
                        int grid_points, RngStream& rng) {
  if (bracket.fixed) return {bracket.fixed_tau, 0.0};
  const TauProposalGrid grid(bracket, p, grid_points);
  const double tau = grid.sample(rng);
  return {tau, grid.log_density(tau)};
}

double log_R(std::span<const double> taus, std::span<const double> xis,
             const BinPartition& partition, const GammaParams& p,
             long long n_scale) {
  const std::size_t K = static_cast<std::size_t>(partition.size());
  if (taus.size() != K || xis.size() != K) {
    throw std::domain_error("log_R: taus/xis must have one entry per bin");
  }
  if (n_scale < 1) throw std::domain_error("log_R: n_scale must be >= 1");
  const double n = static_cast<double>(n_scale);
  double prev_tau = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (taus[k] < prev_tau) {
      throw std::domain_error("log_R: taus must be nondecreasing");
    }
    if (!(xis[k] > 0.0)) {
      throw std::domain_error("log_R: xis must be positive");
    }
    const double db = partition.upper(static_cast<int>(k) + 1) -
                      partition.lower(static_cast<int>(k) + 1);
    acc += p.beta * (1.0 - n / xis[k]) * db -
           p.alpha * (taus[k] - prev_tau) * std::log(xis[k] / n);
    prev_tau = taus[k];
  }
  return acc;
}

double mh_log_accept_ratio(double logf_new, double logR_new, double logq_new,
                           double logf_cur, double logR_cur, double logq_cur) {
  return (logf_new + logR_new - logq_new) - (logf_cur + logR_cur - logq_cur);
}

AugmentedState initial_state(const std::vector<Bracket>& brackets,
                             const BinPartition& partition,
                             const PriorSpec& prior, const GammaParams& p,
                             long long n_scale) {
  prior.validate();
  if (static_cast<int>(brackets.size()) != partition.size() ||
      prior.size() != partition.size()) {
    throw std::domain_error("initial_state: length mismatch");
  }
  AugmentedState state;
  state.taus.resize(brackets.size());
  state.xis.resize(brackets.size());
  for (std::size_t k = 0; k < brackets.size(); ++k) {
    state.taus[k] = brackets[k].fixed
                        ? brackets[k].fixed_tau
                        : 0.5 * (brackets[k].t_lo + brackets[k].t_hi);
    state.xis[k] = prior.alpha[k] > 1.0
                       ? prior.beta[k] / (prior.alpha[k] - 1.0)
                       : prior.beta[k] / (prior.alpha[k] + 1.0);
  }
  state.log_weight = log_R(state.taus, state.xis, partition, p, n_scale);
  return state;
}

void gibbs_sweep(AugmentedState& state, const std::vector<Bracket>& brackets,
                 const std::vector<TauProposalGrid>& proposals,
                 const BinPartition& partition, const PriorSpec& prior,
                 const GammaParams& p, long long n_scale, RngStream& rng,
                 SweepCounters* counters, bool update_xis) {
  const std::size_t K = brackets.size();
  if (state.taus.size() != K || proposals.size() != K) {
    throw std::domain_error("gibbs_sweep: state/bracket length mismatch");
  }
  const double n = static_cast<double>(n_scale);

  double logR_cur = log_R(state.taus, state.xis, partition, p, n_scale);
  for (std::size_t k = 0; k < K; ++k) {
    if (brackets[k].fixed) continue;
    if (counters) ++counters->proposed[k];
    const double tau_new = proposals[k].sample(rng);
    // Ordering constraint against the current neighbours; violations on
    // shared brackets count as rejections, not errors.
    const double lo = k == 0 ? 0.0 : state.taus[k - 1];
    const double hi = k + 1 < K ? state.taus[k + 1]
                                : std::numeric_limits<double>::infinity();
    if (tau_new < lo || tau_new > hi) continue;

    const double tau_cur = state.taus[k];
    std::vector<double> taus_new(state.taus.begin(), state.taus.end());
    taus_new[k] = tau_new;
    const double logR_new = log_R(taus_new, state.xis, partition, p, n_scale);
    const double ratio = mh_log_accept_ratio(
        tau_log_density(tau_new, brackets[k], p), logR_new,
        proposals[k].log_density(tau_new),
        tau_log_density(tau_cur, brackets[k], p), logR_cur,
        proposals[k].log_density(tau_cur));
    if (ratio >= 0.0 || std::log(rng.uniform()) < ratio) {
      state.taus[k] = tau_new;
      logR_cur = logR_new;
      if (counters) ++counters->accepted[k];
    }
  }

  if (update_xis) {
    double prev_tau = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double dtau = state.taus[k] - prev_tau;
      const double db = partition.upper(static_cast<int>(k) + 1) -
                        partition.lower(static_cast<int>(k) + 1);
      const double shape = p.alpha * dtau + prior.alpha[k];
      const double scale = n * p.beta * db + prior.beta[k];
      state.xis[k] = sample_inverse_gamma(shape, scale, rng);
      prev_tau = state.taus[k];
    }
  }
  state.log_weight = log_R(state.taus, state.xis, partition, p, n_scale);
}

void gibbs_sweep(AugmentedState& state, const DiscreteObservations& obs,
                 const BinPartition& partition, const PriorSpec& prior,
                 const GammaParams& p, long long n_scale, int grid_points,
                 RngStream& rng, SweepCounters* counters) {
  const auto brackets = bracket_crossings(obs, partition);
  std::vector<TauProposalGrid> proposals;
  proposals.reserve(brackets.size());
  for (const auto& b : brackets) {
    proposals.emplace_back(b, p, grid_points);
  }
  gibbs_sweep(state, brackets, proposals, partition, prior, p, n_scale, rng,
              counters);
}

namespace {

void check_each_bin_observed(const DiscreteObservations& obs,
                             const BinPartition& partition) {
  std::vector<int> count(static_cast<std::size_t>(partition.size()), 0);
  for (double x : obs.values) {
    if (x >= 0.0 && x < partition.upper_end()) {
      ++count[static_cast<std::size_t>(bin_index(partition, x)) - 1];
    }
  }
  for (std::size_t k = 0; k < count.size(); ++k) {
    if (count[k] == 0) {
      throw std::domain_error(
          "run_chain: bin " + std::to_string(k + 1) +
          " contains no observation; the sampler assumes at least one "
          "observation per bin");
    }
  }
}

}  // namespace

ChainResult run_chain(const DiscreteObservations& obs,
                      const BinPartition& partition, const PriorSpec& prior,
                      const GammaParams& p, long long n_scale,
                      const ChainConfig& config, RngStream& rng) {
  if (config.burn_in < 0 || config.iterations <= config.burn_in) {
    throw std::domain_error("run_chain: need iterations > burn_in >= 0");
  }
  if (config.thin < 1) {
    throw std::domain_error("run_chain: thin must be >= 1");
  }
  check_each_bin_observed(obs, partition);
  const auto brackets = bracket_crossings(obs, partition);
  std::vector<TauProposalGrid> proposals;
  proposals.reserve(brackets.size());
  for (const auto& b : brackets) {
    proposals.emplace_back(b, p, config.grid_points);
  }

  const std::size_t K = brackets.size();
  AugmentedState state = initial_state(brackets, partition, prior, p, n_scale);
  SweepCounters counters;
  counters.proposed.assign(K, 0);
  counters.accepted.assign(K, 0);

  ChainResult result;
  for (long long iter = 1; iter <= config.iterations; ++iter) {
    gibbs_sweep(state, brackets, proposals, partition, prior, p, n_scale, rng,
                &counters);
    if (iter > config.burn_in && (iter - config.burn_in - 1) % config.thin == 0) {
      result.xi_samples.push_back(state.xis);
      result.tau_samples.push_back(state.taus);
      result.kept_iterations.push_back(iter);
    }
  }

  result.acceptance.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    result.acceptance[k] =
        counters.proposed[k] == 0
            ? 1.0
            : static_cast<double>(counters.accepted[k]) /
                  static_cast<double>(counters.proposed[k]);
  }

  const std::size_t kept = result.xi_samples.size();
  result.xi_mean.assign(K, 0.0);
  result.xi_sd.assign(K, 0.0);
  for (const auto& draw : result.xi_samples) {
    for (std::size_t k = 0; k < K; ++k) result.xi_mean[k] += draw[k];
  }
  for (std::size_t k = 0; k < K; ++k) result.xi_mean[k] /= static_cast<double>(kept);
  if (kept > 1) {
    for (const auto& draw : result.xi_samples) {
      for (std::size_t k = 0; k < K; ++k) {
        const double d = draw[k] - result.xi_mean[k];
        result.xi_sd[k] += d * d;
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      result.xi_sd[k] = std::sqrt(result.xi_sd[k] / static_cast<double>(kept - 1));
    }
  }
  return result;
}

}  // namespace gvol
