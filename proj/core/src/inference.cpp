#include "gvol/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "gvol/special.hpp"

namespace gvol {

PriorSpec PriorSpec::constant(int K, double alpha_k, double beta_k) {
  if (K < 1) throw std::domain_error("PriorSpec: K must be >= 1");
  PriorSpec prior;
  prior.alpha.assign(static_cast<std::size_t>(K), alpha_k);
  prior.beta.assign(static_cast<std::size_t>(K), beta_k);
  prior.validate();
  return prior;
}

void PriorSpec::validate() const {
  if (alpha.empty() || alpha.size() != beta.size()) {
    throw std::domain_error("PriorSpec: alpha/beta lengths must match");
  }
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!(alpha[k] > 0.0) || !(beta[k] > 0.0)) {
      throw std::domain_error("PriorSpec: parameters must be positive");
    }
  }
}

SufficientStats sufficient_stats(const HittingRecord& rec, long long n_scale,
                                 const GammaParams& p) {
  if (n_scale < 1) {
    throw std::domain_error("sufficient_stats: n_scale must be >= 1");
  }
  SufficientStats stats;
  stats.n_scale = n_scale;
  stats.process = p;
  const std::size_t K = rec.size();
  stats.d_tau.resize(K);
  stats.d_x.resize(K);
  double prev_tau = 0.0;
  double prev_x = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double dtau = rec.tau[k] - prev_tau;
    const double dx = rec.x_at_tau[k] - prev_x;
    if (dtau < 0.0 || dx < 0.0) {
      throw std::domain_error(
          "sufficient_stats: record has negative increments at level " +
          std::to_string(k + 1));
    }
    if (dtau == 0.0 && dx != 0.0) {
      throw std::domain_error(
          "sufficient_stats: zero duration with nonzero increment at level " +
          std::to_string(k + 1));
    }
    stats.d_tau[k] = dtau;
    stats.d_x[k] = dx;
    prev_tau = rec.tau[k];
    prev_x = rec.x_at_tau[k];
  }
  return stats;
}

std::vector<double> log_likelihood_terms(const SufficientStats& stats,
                                         std::span<const double> values) {
  if (values.size() != stats.d_tau.size()) {
    throw std::domain_error("log_likelihood_terms: length mismatch");
  }
  const double n = static_cast<double>(stats.n_scale);
  const double alpha = stats.process.alpha;
  const double beta = stats.process.beta;
  std::vector<double> terms(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double xi = values[k];
    if (!(xi > 0.0)) {
      throw std::domain_error("log_likelihood_terms: values must be positive");
    }
    terms[k] = beta * (1.0 - n / xi) * stats.d_x[k] -
               alpha * stats.d_tau[k] * std::log(xi / n);
  }
  return terms;
}

double log_likelihood_ratio(const SufficientStats& stats,
                            std::span<const double> values) {
  const auto terms = log_likelihood_terms(stats, values);
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

IGPosterior posterior(const SufficientStats& stats, const PriorSpec& prior) {
  prior.validate();
  if (prior.size() != stats.size()) {
    throw std::domain_error("posterior: prior/stats length mismatch");
  }
  const double n = static_cast<double>(stats.n_scale);
  IGPosterior post;
  post.shape.resize(stats.d_tau.size());
  post.scale.resize(stats.d_tau.size());
  for (std::size_t k = 0; k < stats.d_tau.size(); ++k) {
    post.shape[k] = stats.process.alpha * stats.d_tau[k] + prior.alpha[k];
    post.scale[k] = n * stats.process.beta * stats.d_x[k] + prior.beta[k];
  }
  return post;
}

std::vector<int> empty_bins(const SufficientStats& stats) {
  std::vector<int> flagged;
  for (std::size_t k = 0; k < stats.d_tau.size(); ++k) {
    if (stats.d_tau[k] == 0.0) flagged.push_back(static_cast<int>(k) + 1);
  }
  return flagged;
}

std::vector<Moments> posterior_moments(const IGPosterior& post) {
  std::vector<Moments> moments(post.shape.size());
  for (std::size_t k = 0; k < post.shape.size(); ++k) {
    const double a = post.shape[k];
    const double b = post.scale[k];
    if (a > 1.0) moments[k].mean = b / (a - 1.0);
    if (a > 2.0) moments[k].variance = b * b / ((a - 1.0) * (a - 1.0) * (a - 2.0));
  }
  return moments;
}

CredibleBand credible_band(const IGPosterior& post, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("credible_band: level must be in (0,1)");
  }
  CredibleBand band;
  band.level = level;
  band.lo.resize(post.shape.size());
  band.hi.resize(post.shape.size());
  const double q_lo = (1.0 - level) / 2.0;
  const double q_hi = (1.0 + level) / 2.0;
  for (std::size_t k = 0; k < post.shape.size(); ++k) {
    band.lo[k] = inverse_gamma_quantile(post.shape[k], post.scale[k], q_lo);
    band.hi[k] = inverse_gamma_quantile(post.shape[k], post.scale[k], q_hi);
  }
  return band;
}

std::vector<double> posterior_median(const IGPosterior& post) {
  std::vector<double> med(post.shape.size());
  for (std::size_t k = 0; k < post.shape.size(); ++k) {
    med[k] = inverse_gamma_quantile(post.shape[k], post.scale[k], 0.5);
  }
  return med;
}

double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::domain_error("sample_inverse_gamma: parameters must be positive");
  }
  for (;;) {
    const double g = sample_standard_gamma(shape, rng);
    if (g > 0.0) return scale / g;
  }
}

namespace {

double weighted_quantile(std::vector<std::pair<double, double>>& xw,
                         double total_w, double q) {
  // xw sorted by x; returns the smallest x with cumulative weight >= q.
  double acc = 0.0;
  for (const auto& [x, w] : xw) {
    acc += w;
    if (acc >= q * total_w) return x;
  }
  return xw.back().first;
}

}  // namespace

ImportanceSummary importance_oracle_posterior(const SufficientStats& stats,
                                              const PriorSpec& prior,
                                              int draws, RngStream& rng) {
  prior.validate();
  if (prior.size() != stats.size()) {
    throw std::domain_error("importance_oracle_posterior: length mismatch");
  }
  if (draws < 100) {
    throw std::domain_error("importance_oracle_posterior: draws too small");
  }
  const std::size_t K = stats.d_tau.size();
  const double n = static_cast<double>(stats.n_scale);
  const double alpha = stats.process.alpha;
  const double beta = stats.process.beta;

  ImportanceSummary out;
  out.mean.resize(K);
  out.q05.resize(K);
  out.q50.resize(K);
  out.q95.resize(K);
  out.ess.resize(K);
  out.se_mean.resize(K);

  // The prior and the likelihood both factor over bins, so each bin is an
  // independent one-dimensional importance-sampling problem.
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> xi(static_cast<std::size_t>(draws));
    std::vector<double> logw(static_cast<std::size_t>(draws));
    double log_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < draws; ++i) {
      const double x = sample_inverse_gamma(prior.alpha[k], prior.beta[k], rng);
      xi[static_cast<std::size_t>(i)] = x;
      const double lw = beta * (1.0 - n / x) * stats.d_x[k] -
                        alpha * stats.d_tau[k] * std::log(x / n);
      logw[static_cast<std::size_t>(i)] = lw;
      log_max = std::max(log_max, lw);
    }
    double sw = 0.0, sw2 = 0.0, swx = 0.0;
    std::vector<std::pair<double, double>> xw(static_cast<std::size_t>(draws));
    for (int i = 0; i < draws; ++i) {
      const double w = std::exp(logw[static_cast<std::size_t>(i)] - log_max);
      const double x = xi[static_cast<std::size_t>(i)];
      sw += w;
      sw2 += w * w;
      swx += w * x;
      xw[static_cast<std::size_t>(i)] = {x, w};
    }
    const double mean = swx / sw;
    const double ess = sw * sw / sw2;
    double var_acc = 0.0;
    for (const auto& [x, w] : xw) var_acc += w * (x - mean) * (x - mean);
    const double var_w = var_acc / sw;
    out.mean[k] = mean;
    out.ess[k] = ess;
    out.se_mean[k] = std::sqrt(var_w / ess);
    if (ess < 100.0) out.low_ess_warning = true;
    std::sort(xw.begin(), xw.end());
    out.q05[k] = weighted_quantile(xw, sw, 0.05);
    out.q50[k] = weighted_quantile(xw, sw, 0.50);
    out.q95[k] = weighted_quantile(xw, sw, 0.95);
  }
  return out;
}

}  // namespace gvol
