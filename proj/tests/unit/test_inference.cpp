#include <doctest.h>

#include <cmath>
#include <vector>

#include "gvol/inference.hpp"
#include "support/oracles.hpp"

using namespace gvol;
using namespace testsupport;

TEST_SUITE_BEGIN("inference");

namespace {

SufficientStats make_stats(std::vector<double> d_tau, std::vector<double> d_x,
                           long long n, GammaParams p) {
  SufficientStats s;
  s.d_tau = std::move(d_tau);
  s.d_x = std::move(d_x);
  s.n_scale = n;
  s.process = p;
  return s;
}

}  // namespace

TEST_CASE("sufficient statistics are plain first differences") {
  HittingRecord rec;
  rec.tau = {3.0, 5.0};
  rec.x_at_tau = {0.12, 0.21};
  rec.overshoot = {0.02, 0.01};
  const auto stats = sufficient_stats(rec, 500, GammaParams(1.0, 1.0));
  CHECK(stats.d_tau == std::vector<double>{3.0, 2.0});
  CHECK(stats.d_x[0] == doctest::Approx(0.12).epsilon(1e-15));
  CHECK(stats.d_x[1] == doctest::Approx(0.09).epsilon(1e-12));

  HittingRecord corrupt = rec;
  corrupt.tau = {5.0, 3.0};
  CHECK_THROWS_AS(sufficient_stats(corrupt, 500, GammaParams(1.0, 1.0)),
                  std::domain_error);

  HittingRecord instant = rec;
  instant.tau = {3.0, 3.0};  // same grid time must mean same value
  CHECK_THROWS_AS(sufficient_stats(instant, 500, GammaParams(1.0, 1.0)),
                  std::domain_error);
  instant.x_at_tau = {0.12, 0.12};
  const auto ok = sufficient_stats(instant, 500, GammaParams(1.0, 1.0));
  CHECK(ok.d_tau[1] == 0.0);
  CHECK(ok.d_x[1] == 0.0);
  CHECK(empty_bins(ok) == std::vector<int>{2});
}

TEST_CASE("log likelihood ratio identities") {
  const auto stats = make_stats({5.0, 2.0, 7.5}, {0.4, 0.0, 1.1}, 3,
                                GammaParams(1.3, 0.8));
  SUBCASE("xi == n makes the ratio vanish exactly") {
    const std::vector<double> xi(3, 3.0);
    CHECK(log_likelihood_ratio(stats, xi) == 0.0);
  }
  SUBCASE("worked single-bin value") {
    const auto s = make_stats({5.0}, {3.0}, 2, GammaParams(1.0, 1.0));
    const std::vector<double> xi{1.0};
    CHECK(log_likelihood_ratio(s, xi) ==
          doctest::Approx(-3.0 + 5.0 * std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("additivity across bins is exact") {
    const std::vector<double> xi{0.9, 4.0, 2.2};
    const auto terms = log_likelihood_terms(stats, xi);
    const double total = log_likelihood_ratio(stats, xi);
    CHECK(terms[0] + terms[1] + terms[2] == total);
    // Contiguous prefix split evaluates identically.
    const auto head = make_stats({5.0, 2.0}, {0.4, 0.0}, 3, stats.process);
    const auto tail = make_stats({7.5}, {1.1}, 3, stats.process);
    const std::vector<double> xi_head{0.9, 4.0};
    const std::vector<double> xi_tail{2.2};
    CHECK(log_likelihood_ratio(head, xi_head) +
              log_likelihood_ratio(tail, xi_tail) ==
          total);
  }
  SUBCASE("nonpositive values rejected") {
    const std::vector<double> xi{1.0, -1.0, 2.0};
    CHECK_THROWS_AS(log_likelihood_ratio(stats, xi), std::domain_error);
  }
}

TEST_CASE("likelihood times IG prior matches the conjugate posterior kernel") {
  // The xi-dependent parts must satisfy, for any xi and xi',
  // [L(xi)+prior(xi)] - [L(xi')+prior(xi')] = post(xi) - post(xi').
  const auto stats = make_stats({11.0, 4.5}, {0.7, 0.3}, 7,
                                GammaParams(0.9, 2.1));
  PriorSpec prior;
  prior.alpha = {0.4, 3.0};
  prior.beta = {0.8, 1.5};
  const auto post = posterior(stats, prior);
  const auto kernel = [](double a, double b, double x) {
    return -(a + 1.0) * std::log(x) - b / x;
  };
  for (std::size_t k = 0; k < 2; ++k) {
    for (double x1 : {0.5, 2.0, 9.0}) {
      for (double x2 : {1.3, 6.0}) {
        std::vector<double> v1{1.0, 1.0}, v2{1.0, 1.0};
        v1[k] = x1;
        v2[k] = x2;
        const double lhs =
            (log_likelihood_terms(stats, v1)[k] +
             kernel(prior.alpha[k], prior.beta[k], x1)) -
            (log_likelihood_terms(stats, v2)[k] +
             kernel(prior.alpha[k], prior.beta[k], x2));
        const double rhs = kernel(post.shape[k], post.scale[k], x1) -
                           kernel(post.shape[k], post.scale[k], x2);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("posterior parameter updates") {
  const auto stats = make_stats({33.0}, {0.1}, 500, GammaParams(1.0, 1.0));
  PriorSpec prior = PriorSpec::constant(1, 0.1, 0.1);
  const auto post = posterior(stats, prior);
  CHECK(post.shape[0] == doctest::Approx(33.1).epsilon(1e-14));
  CHECK(post.scale[0] == doctest::Approx(50.1).epsilon(1e-14));

  SUBCASE("no data keeps the prior") {
    const auto empty = make_stats({0.0}, {0.0}, 500, GammaParams(1.0, 1.0));
    const auto p2 = posterior(empty, prior);
    CHECK(p2.shape[0] == prior.alpha[0]);
    CHECK(p2.scale[0] == prior.beta[0]);
  }
  SUBCASE("linearity in the data") {
    const auto doubled = make_stats({66.0}, {0.2}, 500, GammaParams(1.0, 1.0));
    const auto p2 = posterior(doubled, prior);
    CHECK(p2.shape[0] - prior.alpha[0] ==
          doctest::Approx(2.0 * (post.shape[0] - prior.alpha[0])).epsilon(1e-12));
    CHECK(p2.scale[0] - prior.beta[0] ==
          doctest::Approx(2.0 * (post.scale[0] - prior.beta[0])).epsilon(1e-12));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(posterior(stats, PriorSpec::constant(3, 0.1, 0.1)),
                    std::domain_error);
  }
}

TEST_CASE("inverse gamma moments, absent when undefined") {
  IGPosterior post;
  post.shape = {3.0, 1.5, 33.1};
  post.scale = {4.0, 4.0, 50.1};
  const auto m = posterior_moments(post);
  CHECK(*m[0].mean == doctest::Approx(2.0));
  CHECK(*m[0].variance == doctest::Approx(4.0));
  CHECK(*m[1].mean == doctest::Approx(8.0));
  CHECK_FALSE(m[1].variance.has_value());
  CHECK(*m[2].mean == doctest::Approx(50.1 / 32.1).epsilon(1e-12));
}

TEST_CASE("credible bands: reciprocal relation, nesting, tail masses") {
  IGPosterior post;
  post.shape = {33.1, 2.0, 0.7};
  post.scale = {50.1, 3.0, 0.4};
  const auto band90 = credible_band(post, 0.9);
  const auto band50 = credible_band(post, 0.5);
  const auto median = posterior_median(post);
  for (int k = 0; k < post.size(); ++k) {
    const double a = post.shape[static_cast<std::size_t>(k)];
    const double b = post.scale[static_cast<std::size_t>(k)];
    // Median against a bisection oracle on the IG CDF (Boost route).
    const double med_oracle = bisect_increasing(
        [&](double x) { return inverse_gamma_cdf_oracle(a, b, x); }, 1e-12,
        b * 1e6, 0.5, 1e-10);
    CHECK(median[static_cast<std::size_t>(k)] ==
          doctest::Approx(med_oracle).epsilon(1e-8));
    // Nested intervals.
    CHECK(band50.lo[static_cast<std::size_t>(k)] >=
          band90.lo[static_cast<std::size_t>(k)]);
    CHECK(band50.hi[static_cast<std::size_t>(k)] <=
          band90.hi[static_cast<std::size_t>(k)]);
    // Equal tail masses at 1e-8.
    CHECK(inverse_gamma_cdf_oracle(a, b, band90.lo[static_cast<std::size_t>(k)]) ==
          doctest::Approx(0.05).epsilon(1e-8));
    CHECK(inverse_gamma_cdf_oracle(a, b, band90.hi[static_cast<std::size_t>(k)]) ==
          doctest::Approx(0.95).epsilon(1e-8));
  }
  CHECK_THROWS_AS(credible_band(post, 0.0), std::domain_error);
  CHECK_THROWS_AS(credible_band(post, 1.0), std::domain_error);
}

TEST_CASE("posterior mean shrinks to sigma along a deterministic sequence") {
  const double sigma = 1.7;
  const long long n = 40;
  const GammaParams p(1.2, 0.9);
  const PriorSpec prior = PriorSpec::constant(1, 2.0, 3.0);
  double prev_gap = 1e9;
  for (double dtau : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double dx = sigma * p.alpha * dtau / (n * p.beta);
    const auto stats = make_stats({dtau}, {dx}, n, p);
    const auto m = posterior_moments(posterior(stats, prior));
    const double gap = std::abs(*m[0].mean - sigma);
    CHECK(gap < prev_gap);
    prev_gap = gap;
    if (dtau == 1e6) CHECK(gap < 1e-3);
  }
}

TEST_CASE("importance oracle agrees with the closed form") {
  RngStream rng(606, 0);
  const auto stats = make_stats({12.0, 8.0}, {2.4, 1.1}, 5,
                                GammaParams(1.0, 1.0));
  PriorSpec prior;
  prior.alpha = {3.0, 2.5};
  prior.beta = {2.0, 3.0};
  const auto is = importance_oracle_posterior(stats, prior, 100000, rng);
  const auto m = posterior_moments(posterior(stats, prior));
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(std::abs(is.mean[k] - *m[k].mean) / *m[k].mean < 0.02);
    CHECK(std::abs(is.mean[k] - *m[k].mean) < 3.0 * is.se_mean[k]);
  }
}

TEST_CASE("importance oracle with zero data reduces to prior sampling") {
  RngStream rng(707, 0);
  const auto stats = make_stats({0.0}, {0.0}, 5, GammaParams(1.0, 1.0));
  const PriorSpec prior = PriorSpec::constant(1, 4.0, 6.0);
  const auto is = importance_oracle_posterior(stats, prior, 50000, rng);
  // All weights are exp(0): the estimator is exactly the sample mean and
  // the effective sample size is the draw count.
  CHECK(is.ess[0] == doctest::Approx(50000.0).epsilon(1e-12));
  const double prior_mean = 6.0 / 3.0;
  CHECK(std::abs(is.mean[0] - prior_mean) < 3.0 * is.se_mean[0]);
  CHECK_FALSE(is.low_ess_warning);
}

TEST_SUITE_END();
