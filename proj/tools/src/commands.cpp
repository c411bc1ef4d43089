#include "gvol_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "gvol/errors.hpp"
#include "gvol/io.hpp"
#include "gvol/parallel.hpp"
#include "gvol/rqv.hpp"

namespace gvol_cli {

using namespace gvol;
using nlohmann::json;

namespace {

BinPartition config_partition(const Config& config, double default_b_K,
                              long long n_for_rate) {
  const double b_K = config.b_K.value_or(default_b_K);
  const int K = config.rate_lambda
                    ? bins_for_rate(n_for_rate, *config.rate_lambda,
                                    config.rate_c)
                    : config.K;
  return equidistant_partition(K, b_K);
}

GammaParams config_gamma(const Config& config) {
  return GammaParams(config.gamma_alpha, config.gamma_beta);
}

double nearest_rank_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(
      std::min(static_cast<double>(v.size()) - 1.0,
               std::floor(q * static_cast<double>(v.size()))));
  return v[idx];
}

void write_json_artifact(const std::filesystem::path& file, const json& doc) {
  write_text_file(file, doc.dump(2) + "\n");
}

json report_json(const ConcentrationReport& rep) {
  json doc;
  doc["n_scale"] = rep.n_scale;
  doc["replicates"] = rep.replicates;
  doc["dt"] = rep.dt;
  doc["theoretical_dtau"] = rep.theoretical_dtau;
  doc["mean_dtau"] = rep.mean_dtau;
  doc["sd_dtau"] = rep.sd_dtau;
  doc["relative_error"] = rep.relative_error;
  doc["cv"] = rep.cv;
  return doc;
}

json report_json(const OvershootReport& rep) {
  json doc;
  doc["n_scale"] = rep.n_scale;
  doc["replicates"] = rep.replicates;
  doc["delta"] = rep.delta;
  doc["sigma_star"] = rep.sigma_star;
  doc["bound"] = rep.bound;
  doc["empirical"] = rep.empirical;
  doc["standard_error"] = rep.standard_error;
  return doc;
}

// Band artifacts out of chain samples: nearest-rank quantiles per bin.
void write_chain_band(const std::filesystem::path& file,
                      const ChainResult& chain, double level) {
  const std::size_t K = chain.xi_mean.size();
  CredibleBand band;
  band.level = level;
  band.lo.resize(K);
  band.hi.resize(K);
  std::vector<double> median(K);
  std::vector<Moments> moments(K);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> draws(chain.xi_samples.size());
    for (std::size_t s = 0; s < draws.size(); ++s) {
      draws[s] = chain.xi_samples[s][k];
    }
    band.lo[k] = nearest_rank_quantile(draws, (1.0 - level) / 2.0);
    band.hi[k] = nearest_rank_quantile(draws, (1.0 + level) / 2.0);
    median[k] = nearest_rank_quantile(draws, 0.5);
    moments[k].mean = chain.xi_mean[k];
  }
  write_band_csv(file, band, median, moments);
}

}  // namespace

void cmd_simulate(const Config& config) {
  const std::uint64_t seed = require_seed(config);
  const GammaParams p = config_gamma(config);
  const auto partition = config_partition(config, 1.0, config.n_scale);
  if (config.stop_level > partition.upper_end()) {
    throw std::invalid_argument(
        "stop_level exceeds the volatility domain b_K");
  }
  const auto sigma_fn = make_test_volatility(config.vol_name, config.vol_scale);
  const auto discrete = discretize_at_midpoints(sigma_fn, partition);
  const std::function<double(double)> sigma =
      config.vol_piecewise
          ? std::function<double(double)>(
                [discrete](double x) { return discrete.evaluate(x); })
          : sigma_fn;
  const double dt = resolve_dt(config, discrete, config.n_scale);

  // Levels up to the stop level; the path may legitimately stop short of
  // the full domain.
  std::vector<double> levels{0.0};
  for (int k = 1; k <= partition.size(); ++k) {
    if (partition.upper(k) <= config.stop_level) {
      levels.push_back(partition.upper(k));
    }
  }
  const BinPartition hit_levels(levels);

  std::uint64_t stride = config.path_stride;
  if (stride == 0) {
    double expected_time = 0.0;
    for (int k = 1; k <= discrete.partition().size(); ++k) {
      expected_time += expected_bin_crossing_time(
          discrete.value(k), discrete.partition().width(k), p, config.n_scale);
    }
    const double expected_steps = expected_time / dt;
    stride = static_cast<std::uint64_t>(
        std::max(1.0, std::floor(expected_steps / 1e6)));
  }

  std::filesystem::create_directories(config.out);
  std::ofstream path_out(config.out / "path.csv");
  if (!path_out) throw IoError("cannot write " + (config.out / "path.csv").string());
  path_out << "t,x\n0,0\n";

  HittingRecord rec;
  int next_level = 1;
  const int K_hit = hit_levels.size();
  RngStream rng(seed, 0);
  std::uint64_t last_step = 0;
  double last_x = 0.0;
  euler_stream(sigma, p, config.n_scale, dt, config.stop_level, rng,
               config.max_steps, [&](std::uint64_t i, double x) {
                 while (next_level <= K_hit && x >= hit_levels.upper(next_level)) {
                   rec.tau.push_back(static_cast<double>(i) * dt);
                   rec.x_at_tau.push_back(x);
                   rec.overshoot.push_back(x - hit_levels.upper(next_level));
                   ++next_level;
                 }
                 if (i % stride == 0) {
                   path_out << format_double(static_cast<double>(i) * dt) << ','
                            << format_double(x) << '\n';
                 }
                 last_step = i;
                 last_x = x;
               });
  if (last_step % stride != 0) {
    path_out << format_double(static_cast<double>(last_step) * dt) << ','
             << format_double(last_x) << '\n';
  }
  path_out.close();
  write_hitting_csv(config.out / "hitting.csv", rec, hit_levels);
}

namespace {

void write_posterior_artifacts(const Config& config, const IGPosterior& post,
                               const std::vector<int>& flagged) {
  const auto band = credible_band(post, config.level);
  const auto median = posterior_median(post);
  const auto moments = posterior_moments(post);
  write_band_csv(config.out / "band.csv", band, median, moments);
  write_text_file(config.out / "posterior.json",
                  posterior_to_json(post, band, median, moments, flagged));
}

}  // namespace

void cmd_fit(const Config& config) {
  if (config.input.empty()) {
    throw std::invalid_argument("fit: --input CSV is required");
  }
  const GammaParams p = config_gamma(config);

  HittingRecord rec;
  if (config.fit_from_path) {
    const auto path = read_path_csv(config.input);
    const auto partition = config_partition(config, 1.0, config.n_scale);
    rec = hitting_times(path, partition);
  } else {
    rec = read_hitting_csv(config.input);
  }

  if (rec.size() == 0) {
    // Prior-only fit: the posterior is the prior on the configured bins.
    IGPosterior prior_post;
    prior_post.shape.assign(static_cast<std::size_t>(config.K),
                            config.prior_alpha);
    prior_post.scale.assign(static_cast<std::size_t>(config.K),
                            config.prior_beta);
    write_posterior_artifacts(config, prior_post, {});
    return;
  }

  // Record rows carry their own levels via x_at_tau - overshoot.
  BinPartition partition(boundaries_from_record(rec));
  const auto stats = sufficient_stats(rec, config.n_scale, p);
  const auto prior = PriorSpec::constant(partition.size(), config.prior_alpha,
                                         config.prior_beta);
  const auto post = posterior(stats, prior);
  write_posterior_artifacts(config, post, empty_bins(stats));
}

void cmd_fit_discrete(const Config& config) {
  if (config.input.empty()) {
    throw std::invalid_argument("fit-discrete: --input CSV is required");
  }
  const std::uint64_t seed = require_seed(config);
  const auto obs = read_obs_csv(config.input);
  const GammaParams p = config_gamma(config);
  const auto partition =
      config_partition(config, obs.values.back(), config.n_scale);
  const auto prior = PriorSpec::constant(partition.size(), config.prior_alpha,
                                         config.prior_beta);
  ChainConfig chain_cfg;
  chain_cfg.iterations = config.mcmc_iterations;
  chain_cfg.burn_in = config.mcmc_burn_in;
  chain_cfg.thin = config.mcmc_thin;
  chain_cfg.grid_points = config.mcmc_grid_points;

  RngStream rng(seed, 0);
  const auto chain =
      run_chain(obs, partition, prior, p, config.n_scale, chain_cfg, rng);
  write_chain_csv(config.out / "chain.csv", chain);
  write_text_file(config.out / "diagnostics.json",
                  chain_diagnostics_to_json(chain));
  write_chain_band(config.out / "band.csv", chain, config.level);
}

void cmd_rqv(const Config& config) {
  if (config.input.empty()) {
    throw std::invalid_argument("rqv: --input series CSV is required");
  }
  const auto series = read_series_csv(config.input);
  const auto prior =
      PriorSpec::constant(config.K, config.prior_alpha, config.prior_beta);

  if (!config.use_mcmc) {
    const auto fit = fit_rqv(series, config.K, prior, config.level);
    write_text_file(config.out / "calibration.json",
                    calibration_to_json(fit.calibration));
    write_band_csv(config.out / "band.csv", fit.band, fit.median, fit.moments);
    write_text_file(
        config.out / "posterior.json",
        posterior_to_json(fit.post, fit.band, fit.median, fit.moments,
                          fit.flagged_bins));
    return;
  }

  // Sensitivity variant: the discrete-time sampler on the realized-QV path.
  const std::uint64_t seed = require_seed(config);
  const auto cal = calibrate(series);
  const auto obs = realized_qv(series);
  const auto partition = equidistant_partition(config.K, obs.values.back());
  const GammaParams p(cal.alpha, cal.beta);
  ChainConfig chain_cfg;
  chain_cfg.iterations = config.mcmc_iterations;
  chain_cfg.burn_in = config.mcmc_burn_in;
  chain_cfg.thin = config.mcmc_thin;
  chain_cfg.grid_points = config.mcmc_grid_points;
  RngStream rng(seed, 0);
  const auto chain = run_chain(obs, partition, prior, p, 1, chain_cfg, rng);
  write_text_file(config.out / "calibration.json", calibration_to_json(cal));
  write_chain_csv(config.out / "chain.csv", chain);
  write_text_file(config.out / "diagnostics.json",
                  chain_diagnostics_to_json(chain));
  write_chain_band(config.out / "band.csv", chain, config.level);
}

namespace {

struct ReplicateFit {
  double sup_err = 0.0;
  double mean_post_sd = 0.0;
};

double ols_slope(const std::vector<double>& x, const std::vector<double>& y,
                 double* intercept) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

}  // namespace

ContractionResult cmd_experiment_contraction(const Config& config) {
  const std::uint64_t seed = require_seed(config);
  if (config.n_values.size() < 3) {
    throw std::invalid_argument(
        "experiment-contraction: need at least 3 n_values to fit a slope");
  }
  for (std::size_t i = 1; i < config.n_values.size(); ++i) {
    if (config.n_values[i] <= config.n_values[i - 1]) {
      throw std::invalid_argument(
          "experiment-contraction: n_values must be increasing");
    }
  }
  if (config.replicates < 1) {
    throw std::invalid_argument("experiment-contraction: replicates >= 1");
  }
  const GammaParams p = config_gamma(config);
  const double b_K = config.b_K.value_or(1.0);
  const auto truth_fn = make_test_volatility(config.vol_name, config.vol_scale);

  ContractionResult result;
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const long long n = config.n_values[ni];
    const auto partition = config_partition(config, b_K, n);
    const int K = partition.size();
    const auto truth_pc = discretize_at_midpoints(truth_fn, partition);
    const auto prior =
        PriorSpec::constant(K, config.prior_alpha, config.prior_beta);
    const double dt = resolve_dt(config, truth_pc, n);

    const RngStream base(seed, ni);
    const auto fits = run_replicates(
        static_cast<std::size_t>(config.replicates), config.threads,
        [&](std::size_t r) -> ReplicateFit {
          RngStream rng = base.child(r);
          const HittingRecord rec =
              config.vol_piecewise
                  ? simulate_hitting_record(truth_pc, p, n, dt, partition, rng,
                                            config.max_steps)
                  : simulate_hitting_record(truth_fn, p, n, dt, partition, rng,
                                            config.max_steps);
          const auto stats = sufficient_stats(rec, n, p);
          const auto post = posterior(stats, prior);
          const auto moments = posterior_moments(post);
          ReplicateFit fit;
          double sd_sum = 0.0;
          for (int k = 1; k <= K; ++k) {
            const auto& m = moments[static_cast<std::size_t>(k) - 1];
            if (!m.mean || !m.variance) {
              throw NumericalError(
                  "contraction: posterior moments undefined (bin crossed "
                  "too fast; increase n or the prior shape)");
            }
            sd_sum += std::sqrt(*m.variance);
          }
          fit.mean_post_sd = sd_sum / K;
          if (config.vol_piecewise) {
            for (int k = 1; k <= K; ++k) {
              const double mean = *moments[static_cast<std::size_t>(k) - 1].mean;
              fit.sup_err = std::max(fit.sup_err,
                                     std::abs(mean - truth_pc.value(k)));
            }
          } else {
            const int grid = 2000;
            for (int i = 0; i < grid; ++i) {
              const double x = (i + 0.5) * b_K / grid;
              const double mean =
                  *moments[static_cast<std::size_t>(bin_index(partition, x)) - 1]
                       .mean;
              fit.sup_err = std::max(fit.sup_err, std::abs(mean - truth_fn(x)));
            }
          }
          return fit;
        });

    ContractionPoint point;
    point.n = n;
    point.K = K;
    double sum = 0.0, sum_sq = 0.0, sd = 0.0;
    for (const auto& f : fits) {
      sum += f.sup_err;
      sum_sq += f.sup_err * f.sup_err;
      sd += f.mean_post_sd;
    }
    point.mean_sup_err = sum / config.replicates;
    point.rmse_sup_err = std::sqrt(sum_sq / config.replicates);
    point.mean_post_sd = sd / config.replicates;
    result.points.push_back(point);
  }

  std::vector<double> log_n, log_err;
  for (const auto& pt : result.points) {
    log_n.push_back(std::log(static_cast<double>(pt.n)));
    log_err.push_back(std::log(pt.mean_sup_err));
  }
  result.slope = ols_slope(log_n, log_err, &result.intercept);

  std::filesystem::create_directories(config.out);
  {
    std::ofstream out(config.out / "contraction.csv");
    out << "n,K,mean_sup_err,rmse_sup_err,mean_post_sd\n";
    for (const auto& pt : result.points) {
      out << pt.n << ',' << pt.K << ',' << format_double(pt.mean_sup_err)
          << ',' << format_double(pt.rmse_sup_err) << ','
          << format_double(pt.mean_post_sd) << '\n';
    }
  }
  json doc;
  doc["schema"] = "gvol.contraction.v1";
  doc["slope"] = result.slope;
  doc["intercept"] = result.intercept;
  json pts = json::array();
  for (const auto& pt : result.points) {
    json row;
    row["n"] = pt.n;
    row["K"] = pt.K;
    row["mean_sup_err"] = pt.mean_sup_err;
    row["rmse_sup_err"] = pt.rmse_sup_err;
    row["mean_post_sd"] = pt.mean_post_sd;
    pts.push_back(row);
  }
  doc["points"] = pts;
  write_json_artifact(config.out / "contraction.json", doc);
  return result;
}

CoverageResult cmd_experiment_coverage(const Config& config) {
  const std::uint64_t seed = require_seed(config);
  if (config.replicates < 1) {
    throw std::invalid_argument(
        "experiment-coverage: replicates must be >= 1");
  }
  const GammaParams p = config_gamma(config);
  const double b_K = config.b_K.value_or(1.0);
  const auto partition = config_partition(config, b_K, config.n_scale);
  const int K = partition.size();
  const auto truth_fn = make_test_volatility(config.vol_name, config.vol_scale);
  const auto truth_pc = discretize_at_midpoints(truth_fn, partition);
  const auto prior =
      PriorSpec::constant(K, config.prior_alpha, config.prior_beta);
  const double dt = resolve_dt(config, truth_pc, config.n_scale);

  const RngStream base(seed, 0);
  const auto covered = run_replicates(
      static_cast<std::size_t>(config.replicates), config.threads,
      [&](std::size_t r) {
        RngStream rng = base.child(r);
        const auto rec = simulate_hitting_record(truth_pc, p, config.n_scale,
                                                 dt, partition, rng,
                                                 config.max_steps);
        const auto post = posterior(sufficient_stats(rec, config.n_scale, p),
                                    prior);
        const auto band = credible_band(post, config.level);
        std::vector<char> hit(static_cast<std::size_t>(K));
        for (int k = 1; k <= K; ++k) {
          const double truth = truth_pc.value(k);
          hit[static_cast<std::size_t>(k) - 1] =
              band.lo[static_cast<std::size_t>(k) - 1] <= truth &&
              truth <= band.hi[static_cast<std::size_t>(k) - 1];
        }
        return hit;
      });

  CoverageResult result;
  result.truth = config.vol_scale;
  result.replicates = config.replicates;
  result.coverage.assign(static_cast<std::size_t>(K), 0.0);
  for (const auto& hit : covered) {
    for (int k = 0; k < K; ++k) {
      result.coverage[static_cast<std::size_t>(k)] +=
          hit[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
    }
  }
  for (auto& c : result.coverage) c /= config.replicates;

  std::filesystem::create_directories(config.out);
  {
    std::ofstream out(config.out / "coverage.csv");
    out << "bin,coverage\n";
    for (int k = 0; k < K; ++k) {
      out << (k + 1) << ','
          << format_double(result.coverage[static_cast<std::size_t>(k)])
          << '\n';
    }
  }
  json doc;
  doc["schema"] = "gvol.coverage.v1";
  doc["level"] = config.level;
  doc["replicates"] = config.replicates;
  doc["coverage"] = result.coverage;
  write_json_artifact(config.out / "coverage.json", doc);
  return result;
}

VerifyResult cmd_verify(const Config& config) {
  const std::uint64_t seed = require_seed(config);
  const GammaParams p = config_gamma(config);
  VerifyResult result;
  RngStream conc_rng(seed, 1);
  result.concentration = verify_hitting_concentration(
      config.verify_sigma, config.verify_delta_b, p, config.n_scale,
      config.replicates, conc_rng, config.dt.value_or(0.0), config.threads);

  const auto partition = config_partition(config, 1.0, config.n_scale);
  const auto vol = discretize_at_midpoints(
      make_test_volatility(config.vol_name, config.vol_scale), partition);
  RngStream over_rng(seed, 2);
  result.overshoot =
      verify_overshoot_bound(vol, p, config.n_scale, config.verify_delta,
                             config.replicates, over_rng, 0.0, config.threads);

  json doc;
  doc["schema"] = "gvol.verify.v1";
  doc["concentration"] = report_json(result.concentration);
  doc["overshoot"] = report_json(result.overshoot);
  write_json_artifact(config.out / "verify.json", doc);
  return result;
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const IoError&) {
    return 3;
  } catch (const NumericalError&) {
    return 4;
  } catch (const std::domain_error&) {
    return 2;
  } catch (const std::invalid_argument&) {
    return 2;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace gvol_cli
