#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gvol/inference.hpp"
#include "gvol/mcmc.hpp"
#include "gvol/rqv.hpp"
#include "gvol/simulate.hpp"
#include "gvol/volatility.hpp"

namespace gvol {

/// Shortest round-trip decimal representation.
std::string format_double(double x);

void write_text_file(const std::filesystem::path& file,
                     const std::string& text);

// CSV surfaces. Headers are exact; parse errors name the file and line.

void write_path_csv(const std::filesystem::path& file,
                    const SimulatedPath& path, std::uint64_t stride = 1);
SimulatedPath read_path_csv(const std::filesystem::path& file);

void write_hitting_csv(const std::filesystem::path& file,
                       const HittingRecord& rec,
                       const BinPartition& partition);
HittingRecord read_hitting_csv(const std::filesystem::path& file);

/// Boundaries 0 = b_0 < ... < b_K recovered from a hitting record via
/// b_k = x_at_tau_k - overshoot_k.
std::vector<double> boundaries_from_record(const HittingRecord& rec);

void write_band_csv(const std::filesystem::path& file,
                    const CredibleBand& band,
                    const std::vector<double>& median,
                    const std::vector<Moments>& moments);

void write_obs_csv(const std::filesystem::path& file,
                   const DiscreteObservations& obs);
DiscreteObservations read_obs_csv(const std::filesystem::path& file);

TimeSeries read_series_csv(const std::filesystem::path& file);
void write_series_csv(const std::filesystem::path& file,
                      const TimeSeries& series);

void write_chain_csv(const std::filesystem::path& file,
                     const ChainResult& chain);

// JSON surfaces; every document carries a "schema" field.

std::string piecewise_to_json(const PiecewiseVolatility& v);
PiecewiseVolatility piecewise_from_json(const std::string& text);

std::string posterior_to_json(const IGPosterior& post,
                              const CredibleBand& band,
                              const std::vector<double>& median,
                              const std::vector<Moments>& moments,
                              const std::vector<int>& flagged_bins);
std::string calibration_to_json(const RqvCalibration& cal);
std::string concentration_report_to_json(const ConcentrationReport& rep);
std::string overshoot_report_to_json(const OvershootReport& rep);
std::string chain_diagnostics_to_json(const ChainResult& chain);

}  // namespace gvol
