#pragma once

#include <span>
#include <vector>

#include "gvol/rng.hpp"

namespace gvol {

/// Parameters of the driving gamma process: increments over duration t
/// follow Gamma(shape alpha*t, rate beta), and the Levy density is
/// alpha * x^{-1} * exp(-beta * x).
struct GammaParams {
  double alpha;
  double beta;

  GammaParams(double alpha_, double beta_);
};

/// Levy density alpha * x^{-1} * exp(-beta*x) for x > 0.
double levy_density(double x, const GammaParams& p);

/// Draw from Gamma(shape, rate 1), valid for every shape > 0.
///
/// Marsaglia & Tsang (2000), "A simple method for generating gamma
/// variables", for shape >= 1; for shape < 1 the standard boost,
/// Gamma(shape) = Gamma(shape+1) * U^{1/shape}. Draws for tiny shapes may
/// underflow to exact 0 in linear space; use sample_log_standard_gamma
/// when ratios of such draws matter.
double sample_standard_gamma(double shape, RngStream& rng);

/// log of a Gamma(shape, rate 1) draw, computed without underflow even
/// for tiny shapes (the U^{1/shape} boost is applied in log space).
double sample_log_standard_gamma(double shape, RngStream& rng);

/// Increment of the gamma process over duration dt: Gamma(alpha*dt, beta).
/// dt = 0 returns exactly 0; dt < 0 is a domain error.
double sample_increment(const GammaParams& p, double dt, RngStream& rng);

/// log density of Gamma(alpha*elapsed, beta) at `increment`; this is the
/// transition log density of the unit-volatility process. Evaluated via
/// log_gamma, never in linear space.
double transition_logdensity(const GammaParams& p, double elapsed,
                             double increment);

/// Gamma process bridge on t_grid = {0 = t_0 < ... < t_M = T}, conditioned
/// on value 0 at 0 and `total` at T.
///
/// Uses the Dirichlet construction: normalized increments over the grid
/// follow Dirichlet(alpha*dt_1, ..., alpha*dt_M), sampled in log space so
/// small concentrations cannot underflow. Marginally value(s)/total is
/// Beta(alpha*s, alpha*(T-s)). Returns the M+1 grid values; endpoints are
/// exactly 0 and `total`.
std::vector<double> sample_bridge(const GammaParams& p,
                                  std::span<const double> t_grid, double total,
                                  RngStream& rng);

}  // namespace gvol
