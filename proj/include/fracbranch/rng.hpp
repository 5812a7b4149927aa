#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fracbranch {

/// Reproducible random stream identified by (seed, stream id).
///
/// Identical identifiers reproduce identical sequences. Parallel code gives
/// each unit of work its own stream id, so results do not depend on how the
/// work is scheduled. Uniform, exponential and Gaussian variates are produced
/// by fixed transforms of the raw 64-bit output (not std:: distributions) so
/// sequences are bit-stable across standard library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Fresh stream sharing this seed, offset in stream-id space.
  RngStream substream(std::uint64_t offset) const { return {seed_, stream_id_ + offset}; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Unit exponential by inverse CDF.
  double exponential() { return -std::log(uniform_open()); }

  /// Standard normal, Marsaglia polar method (pairs are cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fracbranch
