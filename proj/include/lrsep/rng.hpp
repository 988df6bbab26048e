#pragma once

#include <cmath>
#include <cstdint>

namespace lrsep {

// SplitMix64 finaliser; used to derive independent stream keys.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key for the stream addressed by a path of integers, e.g. (seed, panel,
// grid point) or (seed, sample index). Different paths give unrelated keys.
inline constexpr std::uint64_t stream_key(std::uint64_t seed) { return mix64(seed); }

template <class... Rest>
inline constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t next, Rest... rest) {
  return stream_key(mix64(seed) ^ (next * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL), rest...);
}

// xoshiro256++ seeded from a 64-bit key through SplitMix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t key) {
    std::uint64_t z = key;
    for (auto& s : s_) {
      z += 0x9e3779b97f4a7c15ULL;
      std::uint64_t x = z;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      s = x ^ (x >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0, 1].
  double uniform_open0() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Standard normal deviates by Box-Muller. Written out rather than using
// std::normal_distribution, whose algorithm differs between standard
// libraries and would break cross-host reproducibility.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key) : gen_(key) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(gen_.uniform_open0()));
    const double angle = 6.283185307179586476925 * gen_.uniform();
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  Xoshiro256& engine() { return gen_; }

 private:
  Xoshiro256 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lrsep
