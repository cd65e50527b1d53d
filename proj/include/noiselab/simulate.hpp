#pragma once

#include <cstdint>
#include <vector>

#include "noiselab/boolean.hpp"
#include "noiselab/graph.hpp"
#include "noiselab/rng.hpp"

namespace noiselab {

enum class JumpMode {
  poisson,           ///< K ~ Poisson(t) jumps
  exponential_gaps,  ///< sum exp(1) holding times until t
};

struct SimConfig {
  std::uint64_t samples = 100000;
  double t = 1.0;
  std::uint64_t seed = 1;
  /// Pairs sample 2k and 2k+1 with mirrored start draws; needs an even count.
  bool antithetic = false;
  JumpMode jumps = JumpMode::poisson;
  unsigned threads = 1;

  void validate() const;
};

struct CovEstimate {
  double mean = 0.0;
  /// Standard error of the product terms f(X_0) f(X_t) only (pair averages
  /// when antithetic). Conservative for the centred estimate.
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double product_mean = 0.0;
  double pooled_mean = 0.0;
};

StateIndex simulate_walk(const SchreierGraph& g, StateIndex x0, double t, Stream& rng,
                         JumpMode mode = JumpMode::poisson);

/// X_0 uniform; estimate E[f(X_0) f(X_t)] − m², m the pooled mean of f(X_0)
/// and f(X_t). Sample i draws from Stream(seed, i).
CovEstimate empirical_covariance(const SchreierGraph& g, const BooleanFunction& f,
                                 const SimConfig& cfg);

/// Same estimate for the transposition walk on {0,1}^n (coordinate k ↔ bit
/// k−1), which conserves the weight of the start state.
CovEstimate empirical_exclusion_covariance(int n, const BooleanFunction& f,
                                           const SimConfig& cfg);

/// End-state counts of `samples` walks started at x0.
std::vector<std::uint64_t> end_state_counts(const SchreierGraph& g, StateIndex x0,
                                            const SimConfig& cfg);

}  // namespace noiselab
