#pragma once

#include <vector>

#include "gvol/inference.hpp"
#include "gvol/mcmc.hpp"
#include "gvol/volatility.hpp"

namespace gvol {

/// Equidistantly sampled measurement series y_0..y_m with sampling
/// interval dt. Missing values are rejected at parse time; quadratic
/// variation is ill-defined across gaps.
struct TimeSeries {
  double dt = 0.0;
  std::vector<double> values;

  void validate() const;
  long long increments() const {
    return static_cast<long long>(values.size()) - 1;
  }
};

/// Driving-process calibration for the realized-QV model:
/// alpha = 1/(2 dt), beta = c/(2 dt), c = m*dt / q_end, which makes
/// E L_{m dt} = q_end hold exactly.
struct RqvCalibration {
  double alpha = 0.0;
  double beta = 0.0;
  double c = 0.0;
  double dt = 0.0;
  long long m = 0;
};

/// Realized quadratic variation path: q_0 = 0 and
/// q_{(i+1)dt} = q_{i dt} + (y_{i+1} - y_i)^2, nondecreasing by
/// construction.
DiscreteObservations realized_qv(const TimeSeries& series);

/// Calibrates (alpha, beta, c) from the series; a constant series has
/// degenerate quadratic variation and is an error.
RqvCalibration calibrate(const TimeSeries& series);

struct RqvFit {
  RqvCalibration calibration;
  BinPartition partition{std::vector<double>{0.0, 1.0}};
  SufficientStats stats;
  IGPosterior post;
  CredibleBand band;
  std::vector<double> median;
  std::vector<Moments> moments;
  std::vector<int> flagged_bins;  // never-crossed / instantly-crossed bins
};

/// Full pipeline: realized QV path, K equidistant bins over [0, q_end],
/// grid-snapped hitting times, continuous-time conjugate posterior with
/// n_scale = 1 and the calibrated driving process. Pure in its inputs.
RqvFit fit_rqv(const TimeSeries& series, int K, const PriorSpec& prior,
               double level = 0.9);

}  // namespace gvol
