#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "lrsep/errors.hpp"

namespace lrsep {

// Number of samples per work block. Blocks are the unit of scheduling and of
// reduction, so results depend on the sample count but never on the number
// of threads.
inline constexpr std::size_t kSampleBlock = 256;

inline std::atomic<unsigned>& default_thread_setting() {
  static std::atomic<unsigned> n{0};
  return n;
}

// 0 selects std::thread::hardware_concurrency().
inline void set_default_threads(unsigned n) { default_thread_setting() = n; }

inline unsigned resolve_threads(unsigned requested) {
  unsigned n = requested ? requested : default_thread_setting().load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

// Runs body(block) for every block in [0, n_blocks). If any block throws,
// the exception from the lowest-numbered failing block is rethrown.
template <class Body>
void parallel_blocks(std::size_t n_blocks, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n_blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) body(b);
    return;
  }
  std::vector<std::exception_ptr> errors(n_blocks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next++; b < n_blocks; b = next++) {
      try {
        body(b);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Streaming mean and sum of squared deviations for a fixed-length vector,
// mergeable with Chan's pairwise update.
class VectorMoments {
 public:
  VectorMoments() = default;
  explicit VectorMoments(std::size_t width) : mean_(width, 0.0), m2_(width, 0.0) {}

  void add(const std::vector<double>& x) {
    ++n_;
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < mean_.size(); ++i) {
      const double d = x[i] - mean_[i];
      mean_[i] += d * inv;
      m2_[i] += d * (x[i] - mean_[i]);
    }
  }

  void merge(const VectorMoments& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    const double n = na + nb;
    for (std::size_t i = 0; i < mean_.size(); ++i) {
      const double d = o.mean_[i] - mean_[i];
      mean_[i] += d * (nb / n);
      m2_[i] += o.m2_[i] + d * d * (na * nb / n);
    }
    n_ += o.n_;
  }

  std::size_t count() const { return n_; }
  const std::vector<double>& mean() const { return mean_; }
  // Standard error of the mean, using the unbiased sample variance.
  std::vector<double> standard_error() const {
    std::vector<double> se(mean_.size(), 0.0);
    if (n_ < 2) return se;
    const double n = static_cast<double>(n_);
    for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::sqrt(m2_[i] / (n - 1.0) / n);
    return se;
  }
  std::vector<double> variance() const {
    std::vector<double> v(mean_.size(), 0.0);
    if (n_ < 2) return v;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = m2_[i] / (static_cast<double>(n_) - 1.0);
    return v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

// Accumulates per-sample vectors produced by sample(index, out) over
// [begin, end) in fixed blocks, merging blocks in index order.
template <class Sample>
VectorMoments reduce_samples(std::size_t width, std::uint64_t begin, std::uint64_t end,
                             unsigned threads, Sample&& sample) {
  require(end >= begin, "sample range is reversed");
  const std::uint64_t total = end - begin;
  const std::size_t n_blocks = static_cast<std::size_t>((total + kSampleBlock - 1) / kSampleBlock);
  std::vector<VectorMoments> parts(n_blocks, VectorMoments(width));
  parallel_blocks(n_blocks, threads, [&](std::size_t b) {
    std::vector<double> x(width);
    const std::uint64_t lo = begin + b * kSampleBlock;
    const std::uint64_t hi = std::min<std::uint64_t>(end, lo + kSampleBlock);
    for (std::uint64_t k = lo; k < hi; ++k) {
      sample(k, x);
      parts[b].add(x);
    }
  });
  VectorMoments out(width);
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace lrsep
