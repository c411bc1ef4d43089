// gvol: simulation and Bayesian volatility estimation for gamma-driven
// SDEs. Subcommands: simulate | fit | fit-discrete | rqv |
// experiment-contraction | experiment-coverage | verify.
// Exit codes: 0 ok, 2 validation, 3 I/O, 4 numerical failure.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gvol/version.hpp"
#include "gvol_cli/commands.hpp"
#include "gvol_cli/config.hpp"

namespace {

using gvol_cli::Config;

void add_common_flags(CLI::App* cmd, Config& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON experiment manifest");
  cmd->add_option("--seed", [&cfg](const CLI::results_t& res) {
    cfg.seed = std::stoull(res[0]);
    return true;
  }, "RNG seed (mandatory wherever randomness is used)");
  cmd->add_option_function<std::string>(
      "--out", [&cfg](const std::string& v) { cfg.out = v; },
      "output directory");
  cmd->add_option_function<unsigned>(
      "--threads", [&cfg](unsigned v) { cfg.threads = v; },
      "replicate-level parallelism (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gamma-SDE volatility estimation toolkit"};
  app.set_version_flag("--version", std::string("gvol ") + gvol::kVersion);
  app.require_subcommand(1);

  Config cfg;
  std::string config_path;
  double opt_level = -1.0;
  long long opt_n = -1;
  int opt_K = -1;
  double opt_bK = -1.0;
  double opt_dt = -1.0;
  int opt_reps = -1;
  std::string opt_input;
  bool flag_from_path = false;
  bool flag_use_mcmc = false;

  const auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n", opt_n, "scaling factor n");
    cmd->add_option("--K", opt_K, "number of bins");
    cmd->add_option("--b-K", opt_bK, "upper end of the state partition");
    cmd->add_option("--level", opt_level, "credible level in (0,1)");
    cmd->add_option("--dt", opt_dt, "Euler step (default: rule-based)");
    cmd->add_option("--replicates", opt_reps, "Monte-Carlo replicates");
    cmd->add_option("--prior-alpha", cfg.prior_alpha, "prior shape per bin");
    cmd->add_option("--prior-beta", cfg.prior_beta, "prior scale per bin");
  };

  auto* c_sim = app.add_subcommand("simulate",
                                   "Euler path + grid-snapped hitting times");
  auto* c_fit = app.add_subcommand("fit",
                                   "conjugate posterior from hitting times");
  auto* c_fitd = app.add_subcommand("fit-discrete",
                                    "data-augmentation sampler on discrete "
                                    "observations");
  auto* c_rqv = app.add_subcommand("rqv",
                                   "realized-QV pipeline on a series CSV");
  auto* c_contr = app.add_subcommand("experiment-contraction",
                                     "posterior error vs n with log-log slope");
  auto* c_cov = app.add_subcommand("experiment-coverage",
                                   "empirical credible-band coverage");
  auto* c_verify = app.add_subcommand("verify",
                                      "Monte-Carlo checks of the passage-time "
                                      "and overshoot laws");

  for (CLI::App* cmd : {c_sim, c_fit, c_fitd, c_rqv, c_contr, c_cov, c_verify}) {
    add_common_flags(cmd, cfg, config_path);
    add_model_flags(cmd);
  }
  for (CLI::App* cmd : {c_fit, c_fitd, c_rqv}) {
    cmd->add_option("--input", opt_input, "input CSV file");
  }
  c_fit->add_flag("--from-path", flag_from_path,
                  "input is a path CSV (t,x) instead of a hitting record");
  c_rqv->add_flag("--use-mcmc", flag_use_mcmc,
                  "run the discrete-time sampler instead of snapped hitting "
                  "times (sensitivity analysis)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      // Flags override the manifest: parse the file first, then reapply.
      const auto seed_from_flag = cfg.seed;
      const auto out_from_flag = cfg.out;
      const auto threads_from_flag = cfg.threads;
      const double pa = cfg.prior_alpha, pb = cfg.prior_beta;
      Config loaded = gvol_cli::load_config(config_path);
      if (seed_from_flag) loaded.seed = seed_from_flag;
      if (out_from_flag != "out") loaded.out = out_from_flag;
      if (threads_from_flag != 1) loaded.threads = threads_from_flag;
      if (pa != 0.1) loaded.prior_alpha = pa;
      if (pb != 0.1) loaded.prior_beta = pb;
      cfg = loaded;
    }
    if (opt_level > 0.0) cfg.level = opt_level;
    if (opt_n > 0) cfg.n_scale = opt_n;
    if (opt_K > 0) cfg.K = opt_K;
    if (opt_bK > 0.0) cfg.b_K = opt_bK;
    if (opt_dt > 0.0) cfg.dt = opt_dt;
    if (opt_reps >= 0) cfg.replicates = opt_reps;
    if (!opt_input.empty()) cfg.input = opt_input;
    if (flag_from_path) cfg.fit_from_path = true;
    if (flag_use_mcmc) cfg.use_mcmc = true;

    if (c_sim->parsed()) gvol_cli::cmd_simulate(cfg);
    if (c_fit->parsed()) gvol_cli::cmd_fit(cfg);
    if (c_fitd->parsed()) gvol_cli::cmd_fit_discrete(cfg);
    if (c_rqv->parsed()) gvol_cli::cmd_rqv(cfg);
    if (c_contr->parsed()) gvol_cli::cmd_experiment_contraction(cfg);
    if (c_cov->parsed()) gvol_cli::cmd_experiment_coverage(cfg);
    if (c_verify->parsed()) gvol_cli::cmd_verify(cfg);
  } catch (const std::exception& e) {
    std::cerr << "gvol: " << e.what() << '\n';
    return gvol_cli::exit_code_for_current_exception();
  }
  return 0;
}
