#include <doctest.h>

#include <cmath>
#include <vector>

#include "gvol/errors.hpp"
#include "gvol/simulate.hpp"
#include "support/oracles.hpp"
#include "support/stats.hpp"

using namespace gvol;
using namespace testsupport;

TEST_SUITE_BEGIN("simulate");

namespace {

PiecewiseVolatility constant_vol(double level, double b_K = 100.0) {
  return PiecewiseVolatility(BinPartition({0.0, b_K}), {level});
}

}  // namespace

TEST_CASE("argument validation happens before any stepping") {
  RngStream rng(1, 0);
  const GammaParams p(1.0, 1.0);
  const auto v = constant_vol(1.0, 1.0);
  CHECK_THROWS_AS(euler_simulate(v, p, 0, 0.1, 0.5, rng), std::domain_error);
  CHECK_THROWS_AS(euler_simulate(v, p, 1, 0.0, 0.5, rng), std::domain_error);
  CHECK_THROWS_AS(euler_simulate(v, p, 1, 0.1, 2.0, rng), std::domain_error);
}

TEST_CASE("constant volatility makes the grid path exact in law") {
  // With sigma == c the Euler value at time m*dt is (c/n) * Gamma(alpha*m*dt,
  // beta) exactly, so X_1 at c=n=alpha=beta=1 must follow Gamma(1,1).
  RngStream base(101, 0);
  const GammaParams p(1.0, 1.0);
  const auto v = constant_vol(1.0);
  std::vector<double> at_one(10000);
  for (std::size_t r = 0; r < at_one.size(); ++r) {
    RngStream rng = base.child(r);
    const auto path = euler_simulate(v, p, 1, 0.01, 12.0, rng);
    REQUIRE(path.values.size() > 100);
    at_one[r] = path.values[100];
  }
  const double d =
      ks_statistic(at_one, [](double x) { return gamma_cdf(1.0, 1.0, x); });
  CHECK(d < ks_critical_one_sample(at_one.size()));
}

TEST_CASE("paths are monotone and cross the stop level") {
  RngStream rng(7, 0);
  const GammaParams p(1.0, 1.0);
  const auto sigma = make_test_volatility("sine", 1.0 / 500.0);
  const auto path = euler_simulate(sigma, p, 1, 1e-4, 1.0, rng);
  CHECK(path.values.front() == 0.0);
  CHECK(path.values.back() >= 1.0);
  for (std::size_t i = 1; i < path.values.size(); ++i) {
    CHECK(path.values[i] >= path.values[i - 1]);
  }
}

TEST_CASE("step budget failure is loud") {
  RngStream rng(3, 0);
  const GammaParams p(1.0, 1.0);
  const auto v = constant_vol(1.0);
  CHECK_THROWS_AS(euler_simulate(v, p, 1000, 1e-6, 50.0, rng, 100),
                  BudgetExceededError);
}

TEST_CASE("hitting time extraction on a hand-made path") {
  SimulatedPath path;
  path.dt = 1.0;
  path.values = {0.0, 0.04, 0.09, 0.12};
  const BinPartition one_level({0.0, 0.1});
  const auto rec = hitting_times(path, one_level);
  REQUIRE(rec.size() == 1);
  CHECK(rec.tau[0] == 3.0);
  CHECK(rec.x_at_tau[0] == 0.12);
  CHECK(rec.overshoot[0] == doctest::Approx(0.02).epsilon(1e-12));

  const BinPartition two_levels({0.0, 0.05, 0.1});
  const auto rec2 = hitting_times(path, two_levels);
  CHECK(rec2.tau[0] <= rec2.tau[1]);

  const BinPartition unreachable({0.0, 0.2});
  CHECK_THROWS_WITH_AS(hitting_times(path, unreachable),
                       doctest::Contains("never reaches level"),
                       std::domain_error);
}

TEST_CASE("hitting times ignore data after the last crossing") {
  SimulatedPath path;
  path.dt = 0.5;
  path.values = {0.0, 0.3, 0.7, 1.2};
  const BinPartition part({0.0, 0.5, 1.0});
  const auto rec = hitting_times(path, part);
  SimulatedPath longer = path;
  longer.values.push_back(5.0);
  longer.values.push_back(9.0);
  const auto rec2 = hitting_times(longer, part);
  CHECK(rec.tau == rec2.tau);
  CHECK(rec.x_at_tau == rec2.x_at_tau);
  CHECK(rec.overshoot == rec2.overshoot);
  // Idempotent.
  const auto rec3 = hitting_times(path, part);
  CHECK(rec.tau == rec3.tau);
}

TEST_CASE("streaming record equals stored-path record draw for draw") {
  const GammaParams p(1.0, 2.0);
  const auto part = equidistant_partition(5, 1.0);
  const auto sine = make_test_volatility("sine", 1.0);
  const auto v = discretize_at_midpoints(sine, part);
  RngStream a(55, 9), b(55, 9);
  const auto path = euler_simulate(v, p, 20, 0.05, 1.0, a);
  const auto rec_stored = hitting_times(path, part);
  const auto rec_stream = simulate_hitting_record(v, p, 20, 0.05, part, b);
  CHECK(rec_stored.tau == rec_stream.tau);
  CHECK(rec_stored.x_at_tau == rec_stream.x_at_tau);
  CHECK(rec_stored.overshoot == rec_stream.overshoot);
}

TEST_CASE("scaling identity: (sigma, n) and (sigma/2, n/2) share paths") {
  const GammaParams p(1.0, 1.0);
  const auto part = equidistant_partition(10, 1.0);
  const auto sine = make_test_volatility("sine", 1.0);
  const auto v1 = discretize_at_midpoints(sine, part);
  std::vector<double> halved = v1.values();
  for (auto& x : halved) x /= 2.0;
  const PiecewiseVolatility v2(part, halved);
  RngStream a(77, 0), b(77, 0);
  const auto p1 = euler_simulate(v1, p, 500, 0.05, 1.0, a);
  const auto p2 = euler_simulate(v2, p, 250, 0.05, 1.0, b);
  CHECK(p1.values == p2.values);  // sigma/n enters only as a ratio
}

TEST_CASE("bin crossing time concentrates on n*db*beta/(alpha*sigma)") {
  const GammaParams p(1.0, 1.0);
  CHECK(expected_bin_crossing_time(1.5, 0.1, p, 500) ==
        doctest::Approx(33.3333333333).epsilon(1e-9));
  RngStream rng(2024, 0);
  const auto rep = verify_hitting_concentration(1.5, 0.1, p, 500, 500, rng);
  CHECK(rep.theoretical_dtau == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
  CHECK(rep.dt == doctest::Approx(rep.theoretical_dtau / 1000.0));
  CHECK(rep.relative_error < 0.05);
}

TEST_CASE("doubling n doubles the mean crossing time") {
  const GammaParams p(1.0, 1.0);
  RngStream r1(31, 0), r2(32, 0);
  const auto rep_n = verify_hitting_concentration(1.5, 0.1, p, 500, 300, r1);
  const auto rep_2n = verify_hitting_concentration(1.5, 0.1, p, 1000, 300, r2);
  const double ratio = rep_2n.mean_dtau / rep_n.mean_dtau;
  CHECK(ratio > 1.9);
  CHECK(ratio < 2.1);
}

TEST_CASE("overshoot bound value and saturation") {
  CHECK(overshoot_lower_bound(1.0, 0.01, 500, 1.0, 2.5) ==
        doctest::Approx((1.0 / 1.01) * (1.0 - std::exp(-2.0))).epsilon(1e-12));

  const GammaParams p(1.0, 1.0);
  const auto part = equidistant_partition(4, 1.0);
  const auto v = discretize_at_midpoints(make_test_volatility("sine", 1.0), part);
  RngStream rng(91, 0);
  // delta far above b_K: every overshoot is below it.
  const auto rep = verify_overshoot_bound(v, p, 100, 10.0, 60, rng);
  for (double e : rep.empirical) CHECK(e == 1.0);
}

TEST_CASE("empirical overshoot probability respects the closed-form bound") {
  const GammaParams p(1.0, 1.0);
  const auto part = equidistant_partition(10, 1.0);
  const auto v = discretize_at_midpoints(make_test_volatility("sine", 1.0), part);
  RngStream rng(4242, 0);
  const auto rep = verify_overshoot_bound(v, p, 500, 0.01, 300, rng);
  CHECK(rep.sigma_star == v.max_value());
  for (std::size_t k = 0; k < rep.empirical.size(); ++k) {
    CHECK(rep.empirical[k] >= rep.bound - 3.0 * rep.standard_error[k]);
  }
}

TEST_CASE("replicate parallelism does not change results") {
  const GammaParams p(1.0, 1.0);
  RngStream r1(500, 0), r2(500, 0);
  const auto serial = verify_hitting_concentration(1.5, 0.1, p, 200, 100, r1,
                                                   0.0, /*threads=*/1);
  const auto threaded = verify_hitting_concentration(1.5, 0.1, p, 200, 100, r2,
                                                     0.0, /*threads=*/4);
  CHECK(serial.mean_dtau == threaded.mean_dtau);
  CHECK(serial.sd_dtau == threaded.sd_dtau);
}

TEST_SUITE_END();
