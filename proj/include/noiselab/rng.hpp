#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace noiselab {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-based substream: output k of stream (seed, id) is a hash of
/// (seed, id, k), so streams never overlap and can be handed to any worker
/// in any order. Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t id)
      : key_(splitmix64(seed ^ splitmix64(id + 0x632be59bd9b4e019ull))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64(key_ + 0xd1b54a32d192ed03ull * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }

  /// Uniform integer in [0, n), unbiased (Lemire's method).
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double exponential() { return -std::log(uniform_open_zero()); }

  double normal() {
    // Box–Muller; one variate per call keeps the stream position simple.
    const double u1 = uniform_open_zero();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Poisson(mean) by CDF inversion, split into chunks so e^{-mean} never
  /// underflows.
  std::uint64_t poisson(double mean) {
    constexpr double kChunk = 32.0;
    std::uint64_t total = 0;
    while (mean > 0.0) {
      const double lambda = mean > kChunk ? kChunk : mean;
      mean -= lambda;
      const double u = uniform();
      double p = std::exp(-lambda);
      double cdf = p;
      std::uint64_t k = 0;
      while (u >= cdf && p > 0.0) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cdf += p;
      }
      total += k;
    }
    return total;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace noiselab
