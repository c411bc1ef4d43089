#pragma once

#include <functional>
#include <string>
#include <vector>

namespace gvol {

/// State-space partition 0 = b_0 < b_1 < ... < b_K. Bins are numbered
/// 1..K with the half-open convention B_1 = [0, b_1], B_k = (b_{k-1}, b_k]
/// for 1 < k < K, and B_K = (b_{K-1}, b_K): a boundary belongs to the bin
/// below it, and b_K itself is outside the domain.
class BinPartition {
 public:
  explicit BinPartition(std::vector<double> boundaries);

  int size() const { return static_cast<int>(boundaries_.size()) - 1; }
  const std::vector<double>& boundaries() const { return boundaries_; }
  double upper_end() const { return boundaries_.back(); }

  /// Lower/upper boundary of bin k (1-based).
  double lower(int k) const { return boundaries_[static_cast<std::size_t>(k) - 1]; }
  double upper(int k) const { return boundaries_[static_cast<std::size_t>(k)]; }
  double width(int k) const { return upper(k) - lower(k); }
  double midpoint(int k) const { return 0.5 * (lower(k) + upper(k)); }

 private:
  std::vector<double> boundaries_;
};

/// Equidistant partition with boundaries k * b_K / K.
BinPartition equidistant_partition(int K, double b_K);

/// 1-based index of the bin containing x, for x in [0, b_K). For an
/// equidistant partition this equals ceil(K*x/b_K) clamped to >= 1.
int bin_index(const BinPartition& partition, double x);

/// Piecewise-constant volatility sum_k value_k * 1_{B_k}(x) with strictly
/// positive per-bin values.
class PiecewiseVolatility {
 public:
  PiecewiseVolatility(BinPartition partition, std::vector<double> values);

  const BinPartition& partition() const { return partition_; }
  const std::vector<double>& values() const { return values_; }
  double value(int k) const { return values_[static_cast<std::size_t>(k) - 1]; }
  double max_value() const;

  double evaluate(double x) const;
  double operator()(double x) const { return evaluate(x); }

 private:
  BinPartition partition_;
  std::vector<double> values_;
};

/// Bin count for the Holder-regime rate: K = max(1, round(c * n^{1/(2*lambda+1)})),
/// so the bin width shrinks like n^{-1/(2*lambda+1)}.
int bins_for_rate(long long n, double lambda, double c = 1.0);

/// Equidistant partition of [0, b_K] with bins_for_rate(n, lambda, c) bins.
BinPartition partition_for_rate(long long n, double lambda, double b_K,
                                double c = 1.0);

/// Named true-volatility test functions, scaled by `scale`:
///   "sine"     x -> scale * (3/2 + sin(2*pi*x))
///   "constant" x -> scale
std::function<double(double)> make_test_volatility(const std::string& name,
                                                   double scale);

/// Per-bin discretization of a function at bin midpoints.
PiecewiseVolatility discretize_at_midpoints(
    const std::function<double(double)>& sigma, const BinPartition& partition);

}  // namespace gvol
