#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gvol/simulate.hpp"

namespace gvol_cli {

/// One experiment manifest: a single JSON document, every field
/// overridable on the command line. Seeds are mandatory wherever
/// randomness is consumed; there is no wall-clock fallback.
struct Config {
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  unsigned threads = 1;

  double gamma_alpha = 1.0;
  double gamma_beta = 1.0;
  long long n_scale = 500;

  std::string vol_name = "sine";
  double vol_scale = 1.0;
  bool vol_piecewise = false;  // truth discretized at bin midpoints

  int K = 10;
  std::optional<double> b_K;          // default: 1.0, or the data range
  std::optional<double> rate_lambda;  // when set, K = bins_for_rate(n)
  double rate_c = 1.0;

  double prior_alpha = 0.1;
  double prior_beta = 0.1;
  double level = 0.9;

  std::optional<double> dt;       // default: min bin crossing time / divisor
  double dt_rule_divisor = 1000.0;
  std::uint64_t max_steps = gvol::kDefaultMaxSteps;
  double stop_level = 1.0;
  std::uint64_t path_stride = 0;  // 0 = auto (~1e6 rows)

  int replicates = 500;
  std::vector<long long> n_values;

  long long mcmc_iterations = 5000;
  long long mcmc_burn_in = 1000;
  long long mcmc_thin = 1;
  int mcmc_grid_points = 256;

  double verify_sigma = 1.5;
  double verify_delta_b = 0.1;
  double verify_delta = 0.01;

  // Resolved input file for the commands that take one.
  std::filesystem::path input;
  bool fit_from_path = false;
  bool use_mcmc = false;
};

/// Parses the JSON manifest; unknown keys are an error so typos fail fast.
Config load_config(const std::filesystem::path& file);

std::uint64_t require_seed(const Config& config);

/// Effective Euler step: explicit dt, or the smallest expected bin
/// crossing time divided by dt_rule_divisor.
double resolve_dt(const Config& config, const gvol::PiecewiseVolatility& vol,
                  long long n_scale);

}  // namespace gvol_cli
