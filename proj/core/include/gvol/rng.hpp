#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gvol {

// SplitMix64 finalizer; used to decorrelate seeds and derive child streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// A reproducible random stream identified by (seed, stream_id).
///
/// Identical (seed, stream_id) pairs replay identical draw sequences,
/// bit for bit, on every platform (mt19937_64 is fully specified and all
/// samplers built on top of it are our own). Distinct stream_ids give
/// statistically independent streams; child streams are derived by
/// hashing (seed, stream_id, counter).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed),
        stream_id_(stream_id),
        engine_(mix64(mix64(seed) ^ mix64(stream_id + 0x632be59bd9b4e019ULL))) {}

  RngStream child(std::uint64_t counter) const {
    return RngStream(mix64(seed_ ^ mix64(stream_id_)), counter);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw on the open interval (0, 1); never returns 0 or 1,
  /// so log(uniform()) is always finite.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        return u * std::sqrt(-2.0 * std::log(s) / s);
      }
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace gvol
