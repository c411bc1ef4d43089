#pragma once

namespace gvol {

/// Thread-safe log of the gamma function for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
/// the CDF of Gamma(shape a, rate 1). Series expansion for x < a + 1,
/// continued fraction otherwise.
double regularized_gamma_lower(double a, double x);

/// Q(a, x) = 1 - P(a, x).
double regularized_gamma_upper(double a, double x);

/// Inverse of P(a, .) in x for p in (0, 1), rate 1. Bracketing bisection,
/// terminates at |P(a,x) - p| <= 1e-12 or an interval of relative width
/// ~1e-14 (well inside the 1e-10 probability tolerance).
double gamma_quantile(double a, double p);

/// CDF of the inverse gamma distribution IG(shape a, scale b) at x > 0.
double inverse_gamma_cdf(double a, double b, double x);

/// Quantile of IG(shape a, scale b): uses the reciprocal relation to
/// gamma quantiles, Q_IG(p) = b / Q_Gamma(a, 1 - p).
double inverse_gamma_quantile(double a, double b, double p);

}  // namespace gvol
