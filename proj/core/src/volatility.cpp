#include "gvol/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gvol {

BinPartition::BinPartition(std::vector<double> boundaries)
    : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2) {
    throw std::domain_error("BinPartition: need at least one bin");
  }
  if (boundaries_.front() != 0.0) {
    throw std::domain_error("BinPartition: first boundary must be exactly 0");
  }
  for (std::size_t i = 1; i < boundaries_.size(); ++i) {
    if (!(boundaries_[i] > boundaries_[i - 1])) {
      throw std::domain_error(
          "BinPartition: boundaries must be strictly increasing");
    }
  }
}

BinPartition equidistant_partition(int K, double b_K) {
  if (K < 1) {
    throw std::domain_error("equidistant_partition: K must be >= 1");
  }
  if (!(b_K > 0.0)) {
    throw std::domain_error("equidistant_partition: b_K must be positive");
  }
  std::vector<double> b(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    b[static_cast<std::size_t>(k)] = static_cast<double>(k) * b_K / K;
  }
  b[0] = 0.0;
  b[static_cast<std::size_t>(K)] = b_K;
  return BinPartition(std::move(b));
}

int bin_index(const BinPartition& partition, double x) {
  const auto& b = partition.boundaries();
  if (!(x >= 0.0) || !(x < b.back())) {
    throw std::domain_error("bin_index: x outside [0, b_K)");
  }
  // First boundary >= x among b_1..b_K; x = b_k lands in bin k.
  const auto it = std::lower_bound(b.begin() + 1, b.end(), x);
  return static_cast<int>(it - b.begin());
}

PiecewiseVolatility::PiecewiseVolatility(BinPartition partition,
                                         std::vector<double> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != partition_.size()) {
    throw std::domain_error(
        "PiecewiseVolatility: values length must equal the bin count");
  }
  for (double v : values_) {
    if (!(v > 0.0)) {
      throw std::domain_error(
          "PiecewiseVolatility: values must be strictly positive");
    }
  }
}

double PiecewiseVolatility::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double PiecewiseVolatility::evaluate(double x) const {
  return value(bin_index(partition_, x));
}

int bins_for_rate(long long n, double lambda, double c) {
  if (n < 1) {
    throw std::domain_error("bins_for_rate: n must be >= 1");
  }
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::domain_error("bins_for_rate: lambda must be in (0, 1]");
  }
  if (!(c > 0.0)) {
    throw std::domain_error("bins_for_rate: c must be positive");
  }
  const double k = c * std::pow(static_cast<double>(n), 1.0 / (2.0 * lambda + 1.0));
  return std::max(1, static_cast<int>(std::llround(k)));
}

BinPartition partition_for_rate(long long n, double lambda, double b_K,
                                double c) {
  return equidistant_partition(bins_for_rate(n, lambda, c), b_K);
}

std::function<double(double)> make_test_volatility(const std::string& name,
                                                   double scale) {
  if (!(scale > 0.0)) {
    throw std::domain_error("make_test_volatility: scale must be positive");
  }
  if (name == "sine") {
    return [scale](double x) {
      return scale * (1.5 + std::sin(2.0 * std::numbers::pi * x));
    };
  }
  if (name == "constant") {
    return [scale](double) { return scale; };
  }
  throw std::domain_error("make_test_volatility: unknown name '" + name +
                          "' (expected sine|constant)");
}

PiecewiseVolatility discretize_at_midpoints(
    const std::function<double(double)>& sigma, const BinPartition& partition) {
  std::vector<double> values(static_cast<std::size_t>(partition.size()));
  for (int k = 1; k <= partition.size(); ++k) {
    values[static_cast<std::size_t>(k) - 1] = sigma(partition.midpoint(k));
  }
  return PiecewiseVolatility(partition, std::move(values));
}

}  // namespace gvol
