#include "gvol_cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "gvol/errors.hpp"

namespace gvol_cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& doc, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) {
      throw std::invalid_argument("config: unknown key '" + key + "' in " +
                                  where);
    }
  }
}

}  // namespace

Config load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw gvol::IoError("cannot open config " + file.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw gvol::IoError("config " + file.string() + ": " + e.what());
  }

  reject_unknown_keys(
      doc,
      {"schema", "seed", "out", "threads", "gamma", "n_scale", "volatility",
       "partition", "rate_bins", "prior", "level", "euler", "replicates",
       "n_values", "mcmc", "verify", "input", "fit_from_path", "use_mcmc"},
      "top level");

  Config cfg;
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
  if (doc.contains("threads")) cfg.threads = doc["threads"].get<unsigned>();
  if (doc.contains("n_scale")) cfg.n_scale = doc["n_scale"].get<long long>();
  if (doc.contains("level")) cfg.level = doc["level"].get<double>();
  if (doc.contains("replicates")) cfg.replicates = doc["replicates"].get<int>();
  if (doc.contains("n_values")) {
    cfg.n_values = doc["n_values"].get<std::vector<long long>>();
  }
  if (doc.contains("input")) cfg.input = doc["input"].get<std::string>();
  if (doc.contains("fit_from_path")) {
    cfg.fit_from_path = doc["fit_from_path"].get<bool>();
  }
  if (doc.contains("use_mcmc")) cfg.use_mcmc = doc["use_mcmc"].get<bool>();

  if (doc.contains("gamma")) {
    const auto& g = doc["gamma"];
    reject_unknown_keys(g, {"alpha", "beta"}, "gamma");
    if (g.contains("alpha")) cfg.gamma_alpha = g["alpha"].get<double>();
    if (g.contains("beta")) cfg.gamma_beta = g["beta"].get<double>();
  }
  if (doc.contains("volatility")) {
    const auto& v = doc["volatility"];
    reject_unknown_keys(v, {"name", "scale", "piecewise"}, "volatility");
    if (v.contains("name")) cfg.vol_name = v["name"].get<std::string>();
    if (v.contains("scale")) cfg.vol_scale = v["scale"].get<double>();
    if (v.contains("piecewise")) cfg.vol_piecewise = v["piecewise"].get<bool>();
  }
  if (doc.contains("partition")) {
    const auto& p = doc["partition"];
    reject_unknown_keys(p, {"K", "b_K"}, "partition");
    if (p.contains("K")) cfg.K = p["K"].get<int>();
    if (p.contains("b_K")) cfg.b_K = p["b_K"].get<double>();
  }
  if (doc.contains("rate_bins")) {
    const auto& r = doc["rate_bins"];
    reject_unknown_keys(r, {"lambda", "c"}, "rate_bins");
    if (r.contains("lambda")) cfg.rate_lambda = r["lambda"].get<double>();
    if (r.contains("c")) cfg.rate_c = r["c"].get<double>();
  }
  if (doc.contains("prior")) {
    const auto& p = doc["prior"];
    reject_unknown_keys(p, {"alpha", "beta"}, "prior");
    if (p.contains("alpha")) cfg.prior_alpha = p["alpha"].get<double>();
    if (p.contains("beta")) cfg.prior_beta = p["beta"].get<double>();
  }
  if (doc.contains("euler")) {
    const auto& e = doc["euler"];
    reject_unknown_keys(
        e, {"dt", "dt_rule_divisor", "max_steps", "stop_level", "path_stride"},
        "euler");
    if (e.contains("dt")) cfg.dt = e["dt"].get<double>();
    if (e.contains("dt_rule_divisor")) {
      cfg.dt_rule_divisor = e["dt_rule_divisor"].get<double>();
    }
    if (e.contains("max_steps")) {
      cfg.max_steps = e["max_steps"].get<std::uint64_t>();
    }
    if (e.contains("stop_level")) cfg.stop_level = e["stop_level"].get<double>();
    if (e.contains("path_stride")) {
      cfg.path_stride = e["path_stride"].get<std::uint64_t>();
    }
  }
  if (doc.contains("mcmc")) {
    const auto& m = doc["mcmc"];
    reject_unknown_keys(m, {"iterations", "burn_in", "thin", "grid_points"},
                        "mcmc");
    if (m.contains("iterations")) {
      cfg.mcmc_iterations = m["iterations"].get<long long>();
    }
    if (m.contains("burn_in")) cfg.mcmc_burn_in = m["burn_in"].get<long long>();
    if (m.contains("thin")) cfg.mcmc_thin = m["thin"].get<long long>();
    if (m.contains("grid_points")) {
      cfg.mcmc_grid_points = m["grid_points"].get<int>();
    }
  }
  if (doc.contains("verify")) {
    const auto& v = doc["verify"];
    reject_unknown_keys(v, {"sigma", "delta_b", "delta"}, "verify");
    if (v.contains("sigma")) cfg.verify_sigma = v["sigma"].get<double>();
    if (v.contains("delta_b")) cfg.verify_delta_b = v["delta_b"].get<double>();
    if (v.contains("delta")) cfg.verify_delta = v["delta"].get<double>();
  }
  return cfg;
}

std::uint64_t require_seed(const Config& config) {
  if (!config.seed) {
    throw std::invalid_argument(
        "a seed is required (set \"seed\" in the config or pass --seed); "
        "wall-clock seeding is not supported");
  }
  return *config.seed;
}

double resolve_dt(const Config& config, const gvol::PiecewiseVolatility& vol,
                  long long n_scale) {
  if (config.dt) {
    if (!(*config.dt > 0.0)) {
      throw std::invalid_argument("config: dt must be positive");
    }
    return *config.dt;
  }
  if (!(config.dt_rule_divisor > 0.0)) {
    throw std::invalid_argument("config: dt_rule_divisor must be positive");
  }
  const gvol::GammaParams p(config.gamma_alpha, config.gamma_beta);
  double min_dtau = std::numeric_limits<double>::infinity();
  const auto& part = vol.partition();
  for (int k = 1; k <= part.size(); ++k) {
    min_dtau = std::min(min_dtau, gvol::expected_bin_crossing_time(
                                      vol.value(k), part.width(k), p, n_scale));
  }
  return min_dtau / config.dt_rule_divisor;
}

}  // namespace gvol_cli
