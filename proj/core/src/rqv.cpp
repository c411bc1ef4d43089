#include "gvol/rqv.hpp"

#include <cmath>
#include <stdexcept>

#include "gvol/simulate.hpp"

namespace gvol {

void TimeSeries::validate() const {
  if (!(dt > 0.0)) {
    throw std::domain_error("TimeSeries: dt must be positive");
  }
  if (values.size() < 2) {
    throw std::domain_error("TimeSeries: need at least two observations");
  }
  for (double y : values) {
    if (!std::isfinite(y)) {
      throw std::domain_error("TimeSeries: values must be finite (no gaps)");
    }
  }
}

DiscreteObservations realized_qv(const TimeSeries& series) {
  series.validate();
  DiscreteObservations obs;
  obs.times.resize(series.values.size());
  obs.values.resize(series.values.size());
  obs.times[0] = 0.0;
  obs.values[0] = 0.0;
  double q = 0.0;
  for (std::size_t i = 1; i < series.values.size(); ++i) {
    const double dy = series.values[i] - series.values[i - 1];
    q += dy * dy;
    obs.times[i] = static_cast<double>(i) * series.dt;
    obs.values[i] = q;
  }
  return obs;
}

RqvCalibration calibrate(const TimeSeries& series) {
  series.validate();
  double q_end = 0.0;
  for (std::size_t i = 1; i < series.values.size(); ++i) {
    const double dy = series.values[i] - series.values[i - 1];
    q_end += dy * dy;
  }
  if (!(q_end > 0.0)) {
    throw std::domain_error("calibrate: degenerate quadratic variation "
                            "(constant series)");
  }
  RqvCalibration cal;
  cal.dt = series.dt;
  cal.m = series.increments();
  cal.c = static_cast<double>(cal.m) * series.dt / q_end;
  cal.alpha = 1.0 / (2.0 * series.dt);
  cal.beta = cal.c / (2.0 * series.dt);
  return cal;
}

RqvFit fit_rqv(const TimeSeries& series, int K, const PriorSpec& prior,
               double level) {
  if (K < 1) throw std::domain_error("fit_rqv: K must be >= 1");
  RqvFit fit;
  fit.calibration = calibrate(series);
  const auto obs = realized_qv(series);
  const double q_end = obs.values.back();
  fit.partition = equidistant_partition(K, q_end);

  // The RQV path lives on the observation grid; hitting times are
  // grid-snapped exactly as for simulated paths. The last observation
  // sits on b_K and defines tau_K.
  SimulatedPath path;
  path.dt = series.dt;
  path.values = obs.values;
  const auto rec = hitting_times(path, fit.partition);

  const GammaParams p(fit.calibration.alpha, fit.calibration.beta);
  fit.stats = sufficient_stats(rec, 1, p);
  fit.post = posterior(fit.stats, prior);
  fit.band = credible_band(fit.post, level);
  fit.median = posterior_median(fit.post);
  fit.moments = posterior_moments(fit.post);
  fit.flagged_bins = empty_bins(fit.stats);
  return fit;
}

}  // namespace gvol
