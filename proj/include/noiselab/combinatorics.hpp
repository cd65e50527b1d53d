#pragma once

#include <cstdint>
#include <limits>

namespace noiselab {

/// C(n, k) in 64-bit arithmetic; saturates at UINT64_MAX on overflow.
constexpr std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t numer = n - k + i;
    // result * numer / i is exact at every step; guard the multiplication.
    if (result > std::numeric_limits<std::uint64_t>::max() / numer)
      return std::numeric_limits<std::uint64_t>::max();
    result = result * numer / i;
  }
  return result;
}

constexpr std::uint64_t factorial(unsigned n) {
  std::uint64_t result = 1;
  for (unsigned i = 2; i <= n; ++i) result *= i;
  return result;
}

}  // namespace noiselab
