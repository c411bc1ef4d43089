#pragma once

#include <vector>

#include "gvol_cli/config.hpp"

namespace gvol_cli {

// Batch commands. Each one validates its inputs before doing any work and
// is a pure function of (config, input files, seed): re-running writes
// byte-identical artifacts.

/// Writes path.csv ("t,x", strided for long runs) and hitting.csv
/// ("k,tau,x_at_tau,overshoot") under config.out.
void cmd_simulate(const Config& config);

/// Continuous-time conjugate fit from a hitting-record CSV (or a path CSV
/// when config.fit_from_path). Writes band.csv and posterior.json.
void cmd_fit(const Config& config);

/// Discrete-observation fit via the data-augmentation sampler. Writes
/// chain.csv, diagnostics.json, and band.csv from the sample quantiles.
void cmd_fit_discrete(const Config& config);

/// Realized-QV pipeline on a series CSV ("t,y"). Writes calibration.json,
/// band.csv, posterior.json; with config.use_mcmc, runs the sampler
/// variant instead of the snapped-hitting-time fit.
void cmd_rqv(const Config& config);

struct ContractionPoint {
  long long n = 0;
  int K = 0;
  double mean_sup_err = 0.0;
  double rmse_sup_err = 0.0;
  double mean_post_sd = 0.0;
};

struct ContractionResult {
  std::vector<ContractionPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Posterior-mean error vs n, with the fitted log-log slope. Writes
/// contraction.csv and contraction.json.
ContractionResult cmd_experiment_contraction(const Config& config);

struct CoverageResult {
  std::vector<double> coverage;  // per bin
  double truth = 0.0;
  int replicates = 0;
};

/// Empirical per-bin coverage of the credible band around a constant
/// truth. Writes coverage.csv and coverage.json.
CoverageResult cmd_experiment_coverage(const Config& config);

struct VerifyResult {
  gvol::ConcentrationReport concentration;
  gvol::OvershootReport overshoot;
};

/// Monte-Carlo verification bundle. Writes verify.json.
VerifyResult cmd_verify(const Config& config);

/// Maps an exception to the documented exit code:
/// 2 validation, 3 I/O, 4 numerical failure.
int exit_code_for_current_exception();

}  // namespace gvol_cli
