#include "gvol/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "gvol/errors.hpp"

namespace gvol {

namespace {

using nlohmann::json;

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw IoError("cannot open " + file.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.empty()) {
    throw IoError(file.string() + ": empty file");
  }
  return lines;
}

std::vector<double> parse_row(const std::string& line,
                              const std::filesystem::path& file,
                              std::size_t lineno, std::size_t expect) {
  std::vector<double> out;
  std::size_t begin = 0;
  while (begin <= line.size()) {
    std::size_t end = line.find(',', begin);
    if (end == std::string::npos) end = line.size();
    double v = 0.0;
    const char* first = line.data() + begin;
    const char* last = line.data() + end;
    while (first < last && *first == ' ') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      throw IoError(file.string() + ":" + std::to_string(lineno) +
                    ": cannot parse number '" +
                    line.substr(begin, end - begin) + "'");
    }
    out.push_back(v);
    if (end == line.size()) break;
    begin = end + 1;
  }
  if (out.size() != expect) {
    throw IoError(file.string() + ":" + std::to_string(lineno) + ": expected " +
                  std::to_string(expect) + " columns, got " +
                  std::to_string(out.size()));
  }
  return out;
}

void expect_header(const std::vector<std::string>& lines,
                   const std::filesystem::path& file,
                   const std::string& header) {
  if (lines[0] != header) {
    throw IoError(file.string() + ":1: expected header '" + header +
                  "', got '" + lines[0] + "'");
  }
}

std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path()) {
    std::filesystem::create_directories(file.parent_path());
  }
  std::ofstream out(file);
  if (!out) {
    throw IoError("cannot write " + file.string());
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& file,
                     const std::string& text) {
  auto out = open_out(file);
  out << text;
  if (!out) throw IoError("write failed for " + file.string());
}

void write_path_csv(const std::filesystem::path& file,
                    const SimulatedPath& path, std::uint64_t stride) {
  if (stride == 0) stride = 1;
  auto out = open_out(file);
  out << "t,x\n";
  const std::size_t last = path.values.size() - 1;
  for (std::size_t i = 0; i < path.values.size(); i += stride) {
    out << format_double(static_cast<double>(i) * path.dt) << ','
        << format_double(path.values[i]) << '\n';
    if (i != last && i + stride > last) {
      // Always emit the crossing point.
      out << format_double(static_cast<double>(last) * path.dt) << ','
          << format_double(path.values[last]) << '\n';
      break;
    }
  }
}

SimulatedPath read_path_csv(const std::filesystem::path& file) {
  const auto lines = read_lines(file);
  expect_header(lines, file, "t,x");
  if (lines.size() < 3) {
    throw IoError(file.string() + ": need at least two path points");
  }
  SimulatedPath path;
  std::vector<double> times;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto row = parse_row(lines[i], file, i + 1, 2);
    times.push_back(row[0]);
    path.values.push_back(row[1]);
  }
  if (times.front() != 0.0 || path.values.front() != 0.0) {
    throw IoError(file.string() + ": path must start at (0, 0)");
  }
  path.dt = times[1] - times[0];
  if (!(path.dt > 0.0)) {
    throw IoError(file.string() + ": nonpositive time step");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double expected = static_cast<double>(i) * path.dt;
    if (std::abs(times[i] - expected) >
        1e-6 * std::max(1.0, std::abs(expected))) {
      throw IoError(file.string() + ":" + std::to_string(i + 2) +
                    ": time grid is not equidistant");
    }
  }
  return path;
}

void write_hitting_csv(const std::filesystem::path& file,
                       const HittingRecord& rec,
                       const BinPartition& partition) {
  if (rec.size() != static_cast<std::size_t>(partition.size())) {
    throw std::domain_error("write_hitting_csv: record/partition mismatch");
  }
  auto out = open_out(file);
  out << "k,tau,x_at_tau,overshoot\n";
  for (std::size_t k = 0; k < rec.size(); ++k) {
    out << (k + 1) << ',' << format_double(rec.tau[k]) << ','
        << format_double(rec.x_at_tau[k]) << ','
        << format_double(rec.overshoot[k]) << '\n';
  }
}

HittingRecord read_hitting_csv(const std::filesystem::path& file) {
  const auto lines = read_lines(file);
  expect_header(lines, file, "k,tau,x_at_tau,overshoot");
  HittingRecord rec;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto row = parse_row(lines[i], file, i + 1, 4);
    const auto k = static_cast<std::size_t>(row[0]);
    if (k != rec.size() + 1) {
      throw IoError(file.string() + ":" + std::to_string(i + 1) +
                    ": levels must be consecutive starting at 1");
    }
    rec.tau.push_back(row[1]);
    rec.x_at_tau.push_back(row[2]);
    rec.overshoot.push_back(row[3]);
  }
  return rec;
}

std::vector<double> boundaries_from_record(const HittingRecord& rec) {
  std::vector<double> b;
  b.reserve(rec.size() + 1);
  b.push_back(0.0);
  for (std::size_t k = 0; k < rec.size(); ++k) {
    b.push_back(rec.x_at_tau[k] - rec.overshoot[k]);
  }
  return b;
}

void write_band_csv(const std::filesystem::path& file,
                    const CredibleBand& band,
                    const std::vector<double>& median,
                    const std::vector<Moments>& moments) {
  auto out = open_out(file);
  out << "bin,lo,median,hi,mean\n";
  for (std::size_t k = 0; k < band.lo.size(); ++k) {
    out << (k + 1) << ',' << format_double(band.lo[k]) << ','
        << format_double(median[k]) << ',' << format_double(band.hi[k]) << ','
        << (moments[k].mean ? format_double(*moments[k].mean)
                            : std::string("nan"))
        << '\n';
  }
}

void write_obs_csv(const std::filesystem::path& file,
                   const DiscreteObservations& obs) {
  auto out = open_out(file);
  out << "t,x\n";
  for (std::size_t i = 0; i < obs.times.size(); ++i) {
    out << format_double(obs.times[i]) << ',' << format_double(obs.values[i])
        << '\n';
  }
}

DiscreteObservations read_obs_csv(const std::filesystem::path& file) {
  const auto lines = read_lines(file);
  expect_header(lines, file, "t,x");
  DiscreteObservations obs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto row = parse_row(lines[i], file, i + 1, 2);
    obs.times.push_back(row[0]);
    obs.values.push_back(row[1]);
  }
  obs.validate();
  return obs;
}

TimeSeries read_series_csv(const std::filesystem::path& file) {
  const auto lines = read_lines(file);
  expect_header(lines, file, "t,y");
  std::vector<double> times;
  TimeSeries series;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto row = parse_row(lines[i], file, i + 1, 2);
    times.push_back(row[0]);
    series.values.push_back(row[1]);
  }
  if (times.size() < 2) {
    throw IoError(file.string() + ": need at least two observations");
  }
  series.dt = times[1] - times[0];
  if (!(series.dt > 0.0)) {
    throw IoError(file.string() + ": nonpositive sampling interval");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double expected = times[0] + static_cast<double>(i) * series.dt;
    if (std::abs(times[i] - expected) >
        1e-6 * std::max(1.0, std::abs(expected))) {
      throw IoError(file.string() + ":" + std::to_string(i + 2) +
                    ": sampling grid is not equidistant");
    }
  }
  series.validate();
  return series;
}

void write_series_csv(const std::filesystem::path& file,
                      const TimeSeries& series) {
  auto out = open_out(file);
  out << "t,y\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << format_double(static_cast<double>(i) * series.dt) << ','
        << format_double(series.values[i]) << '\n';
  }
}

void write_chain_csv(const std::filesystem::path& file,
                     const ChainResult& chain) {
  auto out = open_out(file);
  out << "iter,bin,xi\n";
  for (std::size_t s = 0; s < chain.xi_samples.size(); ++s) {
    for (std::size_t k = 0; k < chain.xi_samples[s].size(); ++k) {
      out << chain.kept_iterations[s] << ',' << (k + 1) << ','
          << format_double(chain.xi_samples[s][k]) << '\n';
    }
  }
}

std::string piecewise_to_json(const PiecewiseVolatility& v) {
  json doc;
  doc["boundaries"] = v.partition().boundaries();
  doc["values"] = v.values();
  return doc.dump(2) + "\n";
}

PiecewiseVolatility piecewise_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("piecewise volatility JSON: ") + e.what());
  }
  if (!doc.contains("boundaries") || !doc.contains("values")) {
    throw IoError("piecewise volatility JSON needs 'boundaries' and 'values'");
  }
  return PiecewiseVolatility(
      BinPartition(doc["boundaries"].get<std::vector<double>>()),
      doc["values"].get<std::vector<double>>());
}

std::string posterior_to_json(const IGPosterior& post,
                              const CredibleBand& band,
                              const std::vector<double>& median,
                              const std::vector<Moments>& moments,
                              const std::vector<int>& flagged_bins) {
  json doc;
  doc["schema"] = "gvol.posterior.v1";
  doc["K"] = post.size();
  doc["shape"] = post.shape;
  doc["scale"] = post.scale;
  doc["level"] = band.level;
  doc["lo"] = band.lo;
  doc["median"] = median;
  doc["hi"] = band.hi;
  json means = json::array();
  json variances = json::array();
  for (const auto& m : moments) {
    means.push_back(m.mean ? json(*m.mean) : json());
    variances.push_back(m.variance ? json(*m.variance) : json());
  }
  doc["mean"] = means;
  doc["variance"] = variances;
  doc["empty_bins"] = flagged_bins;
  return doc.dump(2) + "\n";
}

std::string calibration_to_json(const RqvCalibration& cal) {
  json doc;
  doc["schema"] = "gvol.calibration.v1";
  doc["alpha"] = cal.alpha;
  doc["beta"] = cal.beta;
  doc["c"] = cal.c;
  doc["dt"] = cal.dt;
  doc["m"] = cal.m;
  return doc.dump(2) + "\n";
}

std::string concentration_report_to_json(const ConcentrationReport& rep) {
  json doc;
  doc["schema"] = "gvol.concentration.v1";
  doc["n_scale"] = rep.n_scale;
  doc["replicates"] = rep.replicates;
  doc["dt"] = rep.dt;
  doc["theoretical_dtau"] = rep.theoretical_dtau;
  doc["mean_dtau"] = rep.mean_dtau;
  doc["sd_dtau"] = rep.sd_dtau;
  doc["relative_error"] = rep.relative_error;
  doc["cv"] = rep.cv;
  return doc.dump(2) + "\n";
}

std::string overshoot_report_to_json(const OvershootReport& rep) {
  json doc;
  doc["schema"] = "gvol.overshoot.v1";
  doc["n_scale"] = rep.n_scale;
  doc["replicates"] = rep.replicates;
  doc["delta"] = rep.delta;
  doc["sigma_star"] = rep.sigma_star;
  doc["bound"] = rep.bound;
  doc["empirical"] = rep.empirical;
  doc["standard_error"] = rep.standard_error;
  return doc.dump(2) + "\n";
}

std::string chain_diagnostics_to_json(const ChainResult& chain) {
  json doc;
  doc["schema"] = "gvol.diagnostics.v1";
  doc["kept_samples"] = chain.xi_samples.size();
  doc["acceptance"] = chain.acceptance;
  doc["xi_mean"] = chain.xi_mean;
  doc["xi_sd"] = chain.xi_sd;
  return doc.dump(2) + "\n";
}

}  // namespace gvol
