#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "fracbranch/rng.hpp"

namespace fracbranch {

/// Monte-Carlo estimate of an expectation.
struct Estimate {
  double mean = 0.0;
  /// Sample standard deviation / sqrt(n); 0 when n < 2.
  double std_error = 0.0;
  std::uint64_t n = 0;
  double truncation_fraction = 0.0;
  /// Empirical second moment, kept as an integrability diagnostic.
  double mean_square = 0.0;
};

struct SampleOutcome {
  double value = 0.0;
  bool truncated = false;
};

/// Streaming moments of one block of samples (Welford), mergeable in a fixed
/// order so that totals do not depend on the number of workers.
class MomentAccumulator {
 public:
  void add(const SampleOutcome& s) {
    ++count_;
    const double delta = s.value - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (s.value - mean_);
    sum_squares_ += s.value * s.value;
    if (s.truncated) ++truncated_;
  }

  void merge(const MomentAccumulator& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    const double n1 = static_cast<double>(count_);
    const double n2 = static_cast<double>(o.count_);
    const double delta = o.mean_ - mean_;
    const double n = n1 + n2;
    mean_ += delta * n2 / n;
    m2_ += o.m2_ + delta * delta * n1 * n2 / n;
    sum_squares_ += o.sum_squares_;
    count_ += o.count_;
    truncated_ += o.truncated_;
  }

  Estimate estimate() const {
    Estimate e;
    e.n = count_;
    if (count_ == 0) return e;
    const double n = static_cast<double>(count_);
    e.mean = mean_;
    e.std_error = count_ > 1 ? std::sqrt(std::max(0.0, m2_ / (n - 1.0)) / n) : 0.0;
    e.truncation_fraction = static_cast<double>(truncated_) / n;
    e.mean_square = sum_squares_ / n;
    return e;
  }

 private:
  std::uint64_t count_ = 0;
  std::uint64_t truncated_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double sum_squares_ = 0.0;
};

/// Samples per scheduling block. Part of the reproducibility contract:
/// changing it changes the floating-point merge order.
inline constexpr std::uint64_t kSampleBlock = 4096;

/// Resolves a requested worker count; 0 means all hardware threads.
inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `draw` for samples 0..n-1, sample i on stream base.substream(i),
/// across `workers` threads. The result is bit-identical for any worker count.
template <class Draw>
Estimate run_samples(std::uint64_t n, const RngStream& base, unsigned workers, Draw&& draw) {
  const std::uint64_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
  std::vector<MomentAccumulator> partial(blocks);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::uint64_t error_block = blocks;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks || failed.load(std::memory_order_relaxed)) return;
      try {
        const std::uint64_t end = std::min(n, (b + 1) * kSampleBlock);
        for (std::uint64_t i = b * kSampleBlock; i < end; ++i) {
          RngStream rng = base.substream(i);
          partial[b].add(draw(rng));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        // keep the lowest failing block so the reported error is stable
        if (b < error_block) {
          error_block = b;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(blocks, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  MomentAccumulator total;
  for (const auto& p : partial) total.merge(p);
  return total.estimate();
}

}  // namespace fracbranch
