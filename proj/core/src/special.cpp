#include "gvol/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gvol {

namespace {
constexpr int kMaxIter = 100000;
constexpr double kEps = 1e-16;
}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: argument must be positive, got " +
                            std::to_string(x));
  }
#if defined(__GLIBC__) || defined(__unix__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

namespace {

// Lower regularized incomplete gamma by its power series; valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Upper regularized incomplete gamma via modified Lentz continued fraction;
// valid for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - log_gamma(a));
}

}  // namespace

double regularized_gamma_lower(double a, double x) {
  if (!(a > 0.0)) {
    throw std::domain_error("regularized_gamma_lower: shape must be positive");
  }
  if (x < 0.0) {
    throw std::domain_error("regularized_gamma_lower: x must be nonnegative");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double regularized_gamma_upper(double a, double x) {
  if (!(a > 0.0)) {
    throw std::domain_error("regularized_gamma_upper: shape must be positive");
  }
  if (x < 0.0) {
    throw std::domain_error("regularized_gamma_upper: x must be nonnegative");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double gamma_quantile(double a, double p) {
  if (!(a > 0.0)) {
    throw std::domain_error("gamma_quantile: shape must be positive");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("gamma_quantile: probability must be in (0,1)");
  }
  double lo = 0.0;
  double hi = a > 1.0 ? a : 1.0;
  int guard = 0;
  while (regularized_gamma_lower(a, hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2000) {
      throw std::runtime_error("gamma_quantile: bracket expansion failed");
    }
  }
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 400; ++i) {
    mid = 0.5 * (lo + hi);
    const double pm = regularized_gamma_lower(a, mid);
    if (std::abs(pm - p) <= 1e-12) return mid;
    if (pm < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * mid) break;
  }
  return mid;
}

double inverse_gamma_cdf(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("inverse_gamma_cdf: parameters must be positive");
  }
  if (x <= 0.0) return 0.0;
  return regularized_gamma_upper(a, b / x);
}

double inverse_gamma_quantile(double a, double b, double p) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error(
        "inverse_gamma_quantile: parameters must be positive");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("inverse_gamma_quantile: probability in (0,1)");
  }
  return b / gamma_quantile(a, 1.0 - p);
}

}  // namespace gvol
