#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gvol/gamma.hpp"
#include "gvol/rng.hpp"
#include "gvol/simulate.hpp"

namespace gvol {

/// Independent inverse-gamma priors per bin, xi_k ~ IG(alpha[k], beta[k]).
struct PriorSpec {
  std::vector<double> alpha;
  std::vector<double> beta;

  static PriorSpec constant(int K, double alpha_k, double beta_k);
  void validate() const;
  int size() const { return static_cast<int>(alpha.size()); }
};

/// Sufficient statistics of the continuous-observation likelihood: per bin
/// the passage duration d_tau[k] and state increment d_x[k], plus the
/// scaling n and the driving-process parameters.
struct SufficientStats {
  std::vector<double> d_tau;
  std::vector<double> d_x;
  long long n_scale = 1;
  GammaParams process{1.0, 1.0};

  int size() const { return static_cast<int>(d_tau.size()); }
};

/// Per-bin inverse-gamma posterior xi_k | X ~ IG(shape[k], scale[k]),
/// shape = alpha*d_tau + alpha_k and scale = n*beta*d_x + beta_k; bins are
/// independent under the posterior.
struct IGPosterior {
  std::vector<double> shape;
  std::vector<double> scale;

  int size() const { return static_cast<int>(shape.size()); }
};

SufficientStats sufficient_stats(const HittingRecord& rec, long long n_scale,
                                 const GammaParams& p);

/// Per-bin terms of the log likelihood ratio log dP^sigma/dP^1:
///   beta * (1 - n/xi_k) * d_x_k - alpha * d_tau_k * log(xi_k / n).
/// The total is the sum; it is exactly additive across bins.
std::vector<double> log_likelihood_terms(const SufficientStats& stats,
                                         std::span<const double> values);
double log_likelihood_ratio(const SufficientStats& stats,
                            std::span<const double> values);

IGPosterior posterior(const SufficientStats& stats, const PriorSpec& prior);

/// Bins with d_tau == 0 (a single jump crossed several levels); the
/// posterior equals the prior there.
std::vector<int> empty_bins(const SufficientStats& stats);

struct Moments {
  std::optional<double> mean;      // requires shape > 1
  std::optional<double> variance;  // requires shape > 2
};

/// Mean scale/(shape-1) and variance scale^2/((shape-1)^2 (shape-2));
/// absent (not infinite) when the shape is too small.
std::vector<Moments> posterior_moments(const IGPosterior& post);

struct CredibleBand {
  double level = 0.0;
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Equal-tailed marginal interval per bin: quantiles at (1 -/+ level)/2
/// of IG(shape, scale), via the reciprocal relation to gamma quantiles.
CredibleBand credible_band(const IGPosterior& post, double level);

std::vector<double> posterior_median(const IGPosterior& post);

/// Self-normalized importance-sampling cross-check of the conjugate
/// posterior: draws xi_k from the prior and weights with the exact
/// per-bin likelihood term. Exists purely as an oracle for posterior().
struct ImportanceSummary {
  std::vector<double> mean;
  std::vector<double> q05, q50, q95;
  std::vector<double> ess;           // per bin
  std::vector<double> se_mean;       // effective standard error of the mean
  bool low_ess_warning = false;      // any bin with ess < 100
};

ImportanceSummary importance_oracle_posterior(const SufficientStats& stats,
                                              const PriorSpec& prior,
                                              int draws, RngStream& rng);

/// Draw from IG(shape, scale) as scale / Gamma(shape, 1).
double sample_inverse_gamma(double shape, double scale, RngStream& rng);

}  // namespace gvol
