#include "noiselab/simulate.hpp"

#include <cmath>
#include <mutex>

#include "noiselab/errors.hpp"
#include "noiselab/parallel.hpp"

namespace noiselab {

void SimConfig::validate() const {
  require(samples >= 1, ErrorCode::invalid_argument, "samples must be at least 1");
  require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_argument,
          "time must be finite and nonnegative");
  require(!antithetic || samples % 2 == 0, ErrorCode::invalid_argument,
          "antithetic sampling needs an even sample count");
}

namespace {

template <class Step>
std::uint64_t jump_count(double t, Stream& rng, JumpMode mode, Step&& step) {
  std::uint64_t k = 0;
  if (mode == JumpMode::poisson) {
    k = rng.poisson(t);
    for (std::uint64_t i = 0; i < k; ++i) step();
  } else {
    double clock = rng.exponential();
    while (clock <= t) {
      step();
      ++k;
      clock += rng.exponential();
    }
  }
  return k;
}

std::uint64_t start_index(Stream& rng, std::uint64_t size, bool mirrored, double& shared) {
  if (!mirrored) shared = rng.uniform();
  const double u = mirrored ? 1.0 - shared : shared;
  const auto x = static_cast<std::uint64_t>(u * static_cast<double>(size));
  return x < size ? x : size - 1;
}

struct Tally {
  std::uint64_t products = 0;  ///< Σ f(X_0) f(X_t)
  std::uint64_t starts = 0;    ///< Σ f(X_0)
  std::uint64_t ends = 0;      ///< Σ f(X_t)
  std::uint64_t unit_sq = 0;   ///< Σ (pair or single product sum)²
};

// Runs `draw(rng, mirrored, shared)` -> (f(X_0), f(X_t)) once per sample and
// merges integer tallies, so the result does not depend on the thread count.
template <class Draw>
CovEstimate estimate(const SimConfig& cfg, Draw&& draw) {
  cfg.validate();
  const std::uint64_t units = cfg.antithetic ? cfg.samples / 2 : cfg.samples;
  const std::uint64_t per_unit = cfg.antithetic ? 2 : 1;
  const unsigned workers = std::max(1u, cfg.threads);
  Tally sum;
  std::mutex merge;

  parallel_for(static_cast<std::size_t>(units), workers, [&](std::size_t begin, std::size_t end) {
    Tally tally;
    for (std::size_t k = begin; k < end; ++k) {
      std::uint64_t unit_products = 0;
      double shared = 0.0;
      for (std::uint64_t j = 0; j < per_unit; ++j) {
        Stream rng(cfg.seed, k * per_unit + j);
        const auto [a, b] = draw(rng, j == 1, shared);
        unit_products += static_cast<std::uint64_t>(a & b);
        tally.starts += a;
        tally.ends += b;
      }
      tally.products += unit_products;
      tally.unit_sq += unit_products * unit_products;
    }
    // Integer sums commute, so merge order does not matter.
    std::lock_guard lock(merge);
    sum.products += tally.products;
    sum.starts += tally.starts;
    sum.ends += tally.ends;
    sum.unit_sq += tally.unit_sq;
  });

  CovEstimate est;
  est.samples = cfg.samples;
  est.seed = cfg.seed;
  const auto n = static_cast<double>(cfg.samples);
  est.product_mean = static_cast<double>(sum.products) / n;
  est.pooled_mean = static_cast<double>(sum.starts + sum.ends) / (2.0 * n);
  est.mean = est.product_mean - est.pooled_mean * est.pooled_mean;

  const auto u = static_cast<double>(units);
  if (units > 1) {
    const double scale = static_cast<double>(per_unit);
    const double s1 = static_cast<double>(sum.products) / scale;
    const double s2 = static_cast<double>(sum.unit_sq) / (scale * scale);
    const double var = std::max(0.0, (s2 - s1 * s1 / u) / (u - 1.0));
    est.std_error = std::sqrt(var / u);
  }
  return est;
}

}  // namespace

StateIndex simulate_walk(const SchreierGraph& g, StateIndex x0, double t, Stream& rng,
                         JumpMode mode) {
  require(t >= 0.0, ErrorCode::invalid_argument, "time must be nonnegative");
  require(x0 < g.size(), ErrorCode::invalid_argument, "start state out of range");
  StateIndex x = x0;
  const std::uint64_t degree = g.degree();
  jump_count(t, rng, mode, [&] { x = g.apply(x, rng.below(degree)); });
  return x;
}

CovEstimate empirical_covariance(const SchreierGraph& g, const BooleanFunction& f,
                                 const SimConfig& cfg) {
  require(f.size() == g.size(), ErrorCode::invalid_argument,
          "function size does not match the graph");
  return estimate(cfg, [&](Stream& rng, bool mirrored, double& shared) {
    const auto x0 = static_cast<StateIndex>(start_index(rng, g.size(), mirrored, shared));
    const StateIndex xt = simulate_walk(g, x0, cfg.t, rng, cfg.jumps);
    return std::pair<unsigned, unsigned>{f[x0], f[xt]};
  });
}

CovEstimate empirical_exclusion_covariance(int n, const BooleanFunction& f,
                                           const SimConfig& cfg) {
  require(n >= 2 && n <= 30, ErrorCode::invalid_argument, "exclusion walk needs 2 <= n <= 30");
  const std::uint64_t size = std::uint64_t{1} << n;
  require(f.size() == size, ErrorCode::invalid_argument,
          "function must be defined on all 2^n states");
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  return estimate(cfg, [&](Stream& rng, bool mirrored, double& shared) {
    const std::uint64_t x0 = start_index(rng, size, mirrored, shared);
    std::uint64_t x = x0;
    jump_count(cfg.t, rng, cfg.jumps, [&] {
      // Pair number p ↦ (i, j), i < j, in lexicographic order.
      std::uint64_t p = rng.below(pairs);
      int i = 0;
      while (p >= static_cast<std::uint64_t>(n - 1 - i)) {
        p -= static_cast<std::uint64_t>(n - 1 - i);
        ++i;
      }
      const int j = i + 1 + static_cast<int>(p);
      if (((x >> i) ^ (x >> j)) & 1u) x ^= (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
    });
    return std::pair<unsigned, unsigned>{f[x0], f[x]};
  });
}

std::vector<std::uint64_t> end_state_counts(const SchreierGraph& g, StateIndex x0,
                                            const SimConfig& cfg) {
  cfg.validate();
  require(x0 < g.size(), ErrorCode::invalid_argument, "start state out of range");
  const unsigned workers = std::max(1u, cfg.threads);
  std::vector<std::uint64_t> out(g.size(), 0);
  std::mutex merge;
  const auto total = static_cast<std::size_t>(cfg.samples);
  parallel_for(total, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> counts(g.size(), 0);
    for (std::size_t k = begin; k < end; ++k) {
      Stream rng(cfg.seed, k);
      ++counts[simulate_walk(g, x0, cfg.t, rng, cfg.jumps)];
    }
    std::lock_guard lock(merge);
    for (std::size_t s = 0; s < out.size(); ++s) out[s] += counts[s];
  });
  return out;
}

}  // namespace noiselab
