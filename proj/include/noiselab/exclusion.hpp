#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "noiselab/boolean.hpp"
#include "noiselab/graph.hpp"
#include "noiselab/noise.hpp"
#include "noiselab/spectral.hpp"

namespace noiselab {

/// One weight level J(n, m) of the cube.
struct Slice {
  int m = 0;
  double p = 0.0;  ///< C(n,m) / 2^n
  SchreierGraph graph;
  Spectrum spectrum;
  /// Cube index (coordinate k ↔ bit k−1) of each slice state.
  std::vector<std::uint32_t> cube_index;
};

struct LayeredOptions {
  /// Cap on Σ_m C(n,m)³.
  double max_work = 4e9;
  unsigned threads = 1;
};

/// Walk on ∪_m J(n, m) started from the uniform law on {0,1}^n. Immutable
/// after construction.
class LayeredWalk {
 public:
  LayeredWalk(int n, std::vector<Slice> slices);

  int n() const { return n_; }
  std::size_t cube_size() const { return std::size_t{1} << n_; }
  const std::vector<Slice>& slices() const { return slices_; }
  const Slice& slice(int m) const { return slices_[static_cast<std::size_t>(m)]; }
  std::vector<double> level_distribution() const;
  /// Pairs (i, j), 1-based with i < j, in generator order.
  const std::vector<std::pair<int, int>>& transpositions() const { return pairs_; }

  /// Values of f restricted to slice m, in slice state order.
  Eigen::VectorXd restrict(const BooleanFunction& f, int m) const;

 private:
  int n_;
  std::vector<Slice> slices_;
  std::vector<std::pair<int, int>> pairs_;
};

/// n ∈ [2, 16]; throws size_limit when the eigen work exceeds the budget.
LayeredWalk build_layered(int n, LayeredOptions options = {});

/// I_i(f) = P(f(X) ≠ f(X ⊕ e_i)) under the uniform law, i = 1..n.
std::vector<double> coordinate_influences(int n, const BooleanFunction& f);

struct SliceInfluenceTable {
  std::vector<std::pair<int, int>> pairs;
  /// per_level[m][k]: I^{(m)}_{pairs[k]}(f).
  std::vector<std::vector<double>> per_level;
  /// Σ_m p_m I^{(m)}_{(ij)}.
  std::vector<double> mixture;
  /// I_{(ij)} enumerated on the whole cube.
  std::vector<double> direct;
  double max_mixture_error = 0.0;
};

SliceInfluenceTable slice_influences(const LayeredWalk& lw, const BooleanFunction& f);

struct LevelStats {
  int m = 0;
  double p = 0.0;
  double mean = 0.0;      ///< E[f | ‖X_0‖ = m]
  double variance = 0.0;  ///< Var(f | ‖X_0‖ = m)
};

std::vector<LevelStats> level_stats(const LayeredWalk& lw, const BooleanFunction& f);

/// Var(E[f(X_0) | ‖X_0‖]).
double level_mean_variance(const LayeredWalk& lw, const BooleanFunction& f);

struct CovarianceSplit {
  double t = 0.0;
  double within = 0.0;
  double between = 0.0;
  double total = 0.0;
};

CovarianceSplit covariance_split(const LayeredWalk& lw, const BooleanFunction& f, double t);

/// Σ_m p_m E[f H_t^{(m)} f | m] − E[f]², without the split.
double exclusion_covariance(const LayeredWalk& lw, const BooleanFunction& f, double t);

struct GoodSliceSet {
  double alpha = 0.0;
  double sum_sq_influence = 0.0;  ///< Σ_i I_i²
  double sum_influence = 0.0;     ///< Σ_i I_i
  double threshold = 0.0;         ///< n (Σ_i I_i²)^{1−2α}
  std::vector<int> member_levels;
  /// Σ_{(ij)} I^{(m)}_{(ij)}² for every level m.
  std::vector<double> level_sums;
  double probability = 1.0;
  double bound = 0.0;             ///< 1 − 4 (Σ_i I_i²)^α
  double bound_sum_form = 0.0;    ///< 1 − 4 (Σ_i I_i)^α
  bool bound_holds = true;
  double transposition_sum_sq = 0.0;  ///< Σ_{(ij)} I_{(ij)}²
  double transposition_limit = 0.0;   ///< 4n Σ_i I_i²
};

GoodSliceSet good_slice_set(const LayeredWalk& lw, const BooleanFunction& f, double alpha);

struct SliceBoundCheck {
  int m = 0;
  bool applicable = false;  ///< 2m(n−m) ≥ ε n(n−1) and the slice has two states
  double C = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double lambda1 = 0.0;          ///< numerical λ_1 of J(n, m)
  double rho = 0.0;              ///< numerical log-Sobolev estimate of J(n, m)
  double nominal_lambda1 = 0.0;    ///< nominal order-1/n slice gap
  double nominal_rho_order = 0.0;  ///< (1/n) log(n(n−1)/(2m(n−m)))
  double slice_influence_sq = 0.0;   ///< Σ_{(ij)} I^{(m)}_{(ij)}²
  bool influence_hypothesis = false; ///< Σ ≤ C(n,2)^{1/2−δ}
  double lhs = 0.0;              ///< Σ_{λ_i < Cλ_1} \hat f_{n,m}(i)²
  double rhs = 0.0;              ///< covariance-bound term, minimized over r
  double best_r = 0.0;
  double closed_form = 0.0;      ///< ½ exp(C log ε log δ + log(2n/(n−1))) n^{1−(1+2δ)/(1+δ)}
  // Chain Cov_m(t) ≤ lhs + e^{−αC} ≤ rhs + e^{−αC} at t = α/λ_1.
  double alpha = 0.0;
  double chain_cov = 0.0;
  double chain_middle = 0.0;
  double chain_upper = 0.0;
  bool holds = true;
};

SliceBoundCheck slice_bound_check(const LayeredWalk& lw, const BooleanFunction& f, int m,
                                  double C, double epsilon, double delta, double alpha = 1.0,
                                  LogSobolevOptions options = {});

struct ExclusionRow {
  double t = 0.0;
  double within = 0.0;
  double between = 0.0;
  double total = 0.0;
};

struct DeltaThreshold {
  double delta = 0.0;
  double threshold = 0.0;  ///< n^{−δ}
  bool below = false;      ///< Σ_i I_i² < n^{−δ}
};

struct ExclusionReport {
  int n = 0;
  std::vector<ExclusionRow> rows;
  double sum_sq_influence = 0.0;
  double sum_influence = 0.0;
  double reference_shape = 0.0;  ///< (log₂ n / √n)²
  std::vector<DeltaThreshold> thresholds;
  GoodSliceSet good;
  double level_mean_variance = 0.0;
};

ExclusionReport exclusion_sensitivity_report(const LayeredWalk& lw, const BooleanFunction& f,
                                             const std::vector<double>& t_grid,
                                             const std::vector<double>& deltas = {},
                                             double alpha = 0.25);

}  // namespace noiselab
