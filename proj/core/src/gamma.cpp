#include "gvol/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gvol/special.hpp"

namespace gvol {

GammaParams::GammaParams(double alpha_, double beta_)
    : alpha(alpha_), beta(beta_) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("GammaParams: alpha and beta must be positive");
  }
}

double levy_density(double x, const GammaParams& p) {
  if (!(x > 0.0)) {
    throw std::domain_error("levy_density: x must be positive");
  }
  return p.alpha / x * std::exp(-p.beta * x);
}

namespace {

// Marsaglia-Tsang rejection for shape >= 1.
double gamma_ge1(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_standard_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) {
    throw std::domain_error("sample_standard_gamma: shape must be positive");
  }
  if (shape >= 1.0) return gamma_ge1(shape, rng);
  // shape < 1: Gamma(a) = Gamma(a+1) * U^{1/a}; may underflow to 0 for
  // tiny shapes, which is the correct double rounding of the draw.
  const double g = gamma_ge1(shape + 1.0, rng);
  return g * std::exp(std::log(rng.uniform()) / shape);
}

double sample_log_standard_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) {
    throw std::domain_error(
        "sample_log_standard_gamma: shape must be positive");
  }
  if (shape >= 1.0) return std::log(gamma_ge1(shape, rng));
  return std::log(gamma_ge1(shape + 1.0, rng)) +
         std::log(rng.uniform()) / shape;
}

double sample_increment(const GammaParams& p, double dt, RngStream& rng) {
  if (dt < 0.0) {
    throw std::domain_error("sample_increment: dt must be nonnegative");
  }
  if (dt == 0.0) return 0.0;
  return sample_standard_gamma(p.alpha * dt, rng) / p.beta;
}

double transition_logdensity(const GammaParams& p, double elapsed,
                             double increment) {
  if (!(elapsed > 0.0)) {
    throw std::domain_error("transition_logdensity: elapsed must be positive");
  }
  if (!(increment > 0.0)) {
    throw std::domain_error(
        "transition_logdensity: increment must be positive");
  }
  const double a = p.alpha * elapsed;
  return a * std::log(p.beta) + (a - 1.0) * std::log(increment) -
         p.beta * increment - log_gamma(a);
}

std::vector<double> sample_bridge(const GammaParams& p,
                                  std::span<const double> t_grid, double total,
                                  RngStream& rng) {
  if (t_grid.size() < 2) {
    throw std::domain_error("sample_bridge: grid needs at least two points");
  }
  if (t_grid.front() != 0.0) {
    throw std::domain_error("sample_bridge: grid must start at 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw std::domain_error("sample_bridge: grid must be strictly increasing");
    }
  }
  if (!(total > 0.0)) {
    throw std::domain_error("sample_bridge: total must be positive");
  }

  const std::size_t m = t_grid.size() - 1;
  std::vector<double> logw(m);
  double log_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    logw[i] = sample_log_standard_gamma(p.alpha * (t_grid[i + 1] - t_grid[i]), rng);
    log_max = std::max(log_max, logw[i]);
  }

  std::vector<double> values(m + 1);
  values[0] = 0.0;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cumulative += std::exp(logw[i] - log_max);
    values[i + 1] = cumulative;
  }
  const double norm = values[m];  // > 0: the max term contributes exactly 1
  for (std::size_t i = 1; i <= m; ++i) {
    values[i] = total * (values[i] / norm);
  }
  values[m] = total;
  return values;
}

}  // namespace gvol
