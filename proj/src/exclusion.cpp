#include "noiselab/exclusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "noiselab/combinatorics.hpp"
#include "noiselab/errors.hpp"
#include "noiselab/parallel.hpp"

namespace noiselab {

LayeredWalk::LayeredWalk(int n, std::vector<Slice> slices) : n_(n), slices_(std::move(slices)) {
  require(static_cast<int>(slices_.size()) == n + 1, ErrorCode::invalid_argument,
          "layered walk needs n + 1 slices");
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) pairs_.emplace_back(i, j);
}

std::vector<double> LayeredWalk::level_distribution() const {
  std::vector<double> p;
  for (const Slice& s : slices_) p.push_back(s.p);
  return p;
}

Eigen::VectorXd LayeredWalk::restrict(const BooleanFunction& f, int m) const {
  require(f.size() == cube_size(), ErrorCode::invalid_argument,
          "function must be defined on all 2^n states");
  const Slice& s = slice(m);
  Eigen::VectorXd v(static_cast<Eigen::Index>(s.cube_index.size()));
  for (std::size_t k = 0; k < s.cube_index.size(); ++k)
    v[static_cast<Eigen::Index>(k)] = f[s.cube_index[k]];
  return v;
}

LayeredWalk build_layered(int n, LayeredOptions options) {
  require(n >= 2 && n <= 16, ErrorCode::invalid_argument, "layered walk needs 2 <= n <= 16");
  double work = 0.0;
  for (int m = 0; m <= n; ++m) work += std::pow(static_cast<double>(binomial(n, m)), 3.0);
  require(work <= options.max_work, ErrorCode::size_limit,
          "eigen work for n = " + std::to_string(n) + " exceeds the budget");

  const double cube = std::ldexp(1.0, n);
  std::vector<std::optional<Slice>> built(static_cast<std::size_t>(n) + 1);
  parallel_for(built.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const int m = static_cast<int>(k);
      SchreierGraph g = build_johnson(n, m, {.max_states = std::size_t{1} << 16});
      Spectrum s = decompose(g);
      std::vector<std::uint32_t> index(g.size());
      for (std::size_t w = 0; w < g.size(); ++w) {
        const std::vector<int> bits = g.states().decode(static_cast<StateIndex>(w));
        std::uint32_t x = 0;
        for (int c = 0; c < n; ++c) x |= static_cast<std::uint32_t>(bits[c]) << c;
        index[w] = x;
      }
      built[k].emplace(Slice{m, static_cast<double>(binomial(n, m)) / cube, std::move(g),
                             std::move(s), std::move(index)});
    }
  });

  std::vector<Slice> slices;
  for (auto& s : built) slices.push_back(std::move(*s));
  return LayeredWalk(n, std::move(slices));
}

std::vector<double> coordinate_influences(int n, const BooleanFunction& f) {
  const std::size_t size = std::size_t{1} << n;
  require(f.size() == size, ErrorCode::invalid_argument,
          "function must be defined on all 2^n states");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t w = 0; w < size; ++w) count += f[w] != f[w ^ (std::size_t{1} << i)];
    out.push_back(static_cast<double>(count) / static_cast<double>(size));
  }
  return out;
}

namespace {

std::size_t swap_bits(std::size_t w, int i, int j) {
  const std::size_t a = (w >> i) & 1u, b = (w >> j) & 1u;
  if (a == b) return w;
  return w ^ ((std::size_t{1} << i) | (std::size_t{1} << j));
}

double sum_squares(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

}  // namespace

SliceInfluenceTable slice_influences(const LayeredWalk& lw, const BooleanFunction& f) {
  require(f.size() == lw.cube_size(), ErrorCode::invalid_argument,
          "function must be defined on all 2^n states");
  SliceInfluenceTable t;
  t.pairs = lw.transpositions();
  t.mixture.assign(t.pairs.size(), 0.0);
  for (const Slice& s : lw.slices()) {
    std::vector<double> row;
    for (std::size_t u = 0; u < s.graph.degree(); ++u) {
      const auto image = s.graph.image(u);
      std::size_t count = 0;
      for (std::size_t w = 0; w < s.graph.size(); ++w)
        count += f[s.cube_index[w]] != f[s.cube_index[image[w]]];
      row.push_back(static_cast<double>(count) / static_cast<double>(s.graph.size()));
      t.mixture[u] += s.p * row.back();
    }
    t.per_level.push_back(std::move(row));
  }
  const std::size_t size = lw.cube_size();
  for (std::size_t k = 0; k < t.pairs.size(); ++k) {
    const auto [i, j] = t.pairs[k];
    std::size_t count = 0;
    for (std::size_t w = 0; w < size; ++w) count += f[w] != f[swap_bits(w, i - 1, j - 1)];
    t.direct.push_back(static_cast<double>(count) / static_cast<double>(size));
    t.max_mixture_error = std::max(t.max_mixture_error, std::abs(t.direct[k] - t.mixture[k]));
  }
  return t;
}

std::vector<LevelStats> level_stats(const LayeredWalk& lw, const BooleanFunction& f) {
  std::vector<LevelStats> out;
  for (const Slice& s : lw.slices()) {
    const Eigen::VectorXd v = lw.restrict(f, s.m);
    const double mean = v.mean();
    out.push_back({s.m, s.p, mean, mean * (1.0 - mean)});
  }
  return out;
}

double level_mean_variance(const LayeredWalk& lw, const BooleanFunction& f) {
  const std::vector<LevelStats> stats = level_stats(lw, f);
  double mean = 0.0;
  for (const auto& s : stats) mean += s.p * s.mean;
  double var = 0.0;
  for (const auto& s : stats) var += s.p * (s.mean - mean) * (s.mean - mean);
  return var;
}

CovarianceSplit covariance_split(const LayeredWalk& lw, const BooleanFunction& f, double t) {
  require(t >= 0.0, ErrorCode::invalid_argument, "time must be nonnegative");
  CovarianceSplit out;
  out.t = t;
  for (const Slice& s : lw.slices()) {
    const Eigen::VectorXd v = lw.restrict(f, s.m);
    // A constant restriction has zero covariance; skip the roundoff of the transform.
    if ((v.array() == v[0]).all()) continue;
    out.within += s.p * exact_covariance(s.spectrum, v, t);
  }
  out.between = level_mean_variance(lw, f);
  out.total = out.within + out.between;
  return out;
}

double exclusion_covariance(const LayeredWalk& lw, const BooleanFunction& f, double t) {
  require(t >= 0.0, ErrorCode::invalid_argument, "time must be nonnegative");
  double product = 0.0;
  for (const Slice& s : lw.slices()) {
    const Eigen::VectorXd v = lw.restrict(f, s.m);
    product += s.p * inner(v, apply_semigroup(s.spectrum, v, t));
  }
  const double mean = static_cast<double>(f.ones()) / static_cast<double>(f.size());
  return product - mean * mean;
}

GoodSliceSet good_slice_set(const LayeredWalk& lw, const BooleanFunction& f, double alpha) {
  require(alpha > 0.0 && alpha < 0.5, ErrorCode::invalid_argument, "alpha must lie in (0,1/2)");
  GoodSliceSet g;
  g.alpha = alpha;
  const std::vector<double> inf = coordinate_influences(lw.n(), f);
  g.sum_sq_influence = sum_squares(inf);
  for (double x : inf) g.sum_influence += x;

  const SliceInfluenceTable table = slice_influences(lw, f);
  for (const auto& row : table.per_level) g.level_sums.push_back(sum_squares(row));
  g.transposition_sum_sq = sum_squares(table.direct);
  g.transposition_limit = 4.0 * lw.n() * g.sum_sq_influence;

  if (g.sum_sq_influence == 0.0) {
    for (int m = 0; m <= lw.n(); ++m) g.member_levels.push_back(m);
    g.probability = 1.0;
    g.bound = 1.0;
    g.bound_sum_form = 1.0;
    g.bound_holds = true;
    return g;
  }
  g.threshold = lw.n() * std::pow(g.sum_sq_influence, 1.0 - 2.0 * alpha);
  g.probability = 0.0;
  for (int m = 0; m <= lw.n(); ++m) {
    if (g.level_sums[static_cast<std::size_t>(m)] < g.threshold) {
      g.member_levels.push_back(m);
      g.probability += lw.slice(m).p;
    }
  }
  g.bound = 1.0 - 4.0 * std::pow(g.sum_sq_influence, alpha);
  g.bound_sum_form = 1.0 - 4.0 * std::pow(g.sum_influence, alpha);
  g.bound_holds = g.probability >= g.bound - 1e-12;
  return g;
}

SliceBoundCheck slice_bound_check(const LayeredWalk& lw, const BooleanFunction& f, int m,
                                  double C, double epsilon, double delta, double alpha,
                                  LogSobolevOptions options) {
  const int n = lw.n();
  require(m >= 0 && m <= n, ErrorCode::invalid_argument, "slice level out of range");
  require(C > 0.0 && epsilon > 0.0 && delta > 0.0 && alpha > 0.0,
          ErrorCode::invalid_argument, "C, epsilon, delta and alpha must be positive");
  SliceBoundCheck r;
  r.m = m;
  r.C = C;
  r.epsilon = epsilon;
  r.delta = delta;
  r.alpha = alpha;
  r.nominal_lambda1 = 1.0 / n;
  const Slice& s = lw.slice(m);
  r.applicable = 2.0 * m * (n - m) >= epsilon * n * (n - 1) && s.graph.size() >= 2;
  if (!r.applicable) return r;

  const double pairs = static_cast<double>(binomial(n, 2));
  r.nominal_rho_order = std::log(n * (n - 1.0) / (2.0 * m * (n - m))) / n;
  r.closed_form = 0.5 * std::exp(C * std::log(epsilon) * std::log(delta) +
                                 std::log(2.0 * n / (n - 1.0))) *
                  std::pow(static_cast<double>(n), 1.0 - (1.0 + 2.0 * delta) / (1.0 + delta));

  const Eigen::VectorXd v = lw.restrict(f, m);
  r.lambda1 = s.spectrum.gap();
  r.rho = estimate_log_sobolev(s.graph, s.spectrum, options).rho_hat;

  const SliceInfluenceTable table = slice_influences(lw, f);
  r.slice_influence_sq = sum_squares(table.per_level[static_cast<std::size_t>(m)]);
  r.influence_hypothesis = r.slice_influence_sq <= std::pow(pairs, 0.5 - delta);

  const double cutoff = C * r.lambda1;
  r.lhs = low_frequency_weight(s.spectrum, v, cutoff);

  std::vector<double> rs;
  for (int i = 1; i <= 19; ++i) rs.push_back(0.05 * i);
  if (delta < 1.0) rs.push_back(delta);
  std::sort(rs.begin(), rs.end());
  const double mean_sq = r.slice_influence_sq / pairs;
  r.rhs = std::numeric_limits<double>::infinity();
  for (double rr : rs) {
    const double value = std::exp(-cutoff * std::log(rr) / r.rho) / (2.0 * r.lambda1) *
                         std::pow(mean_sq, 1.0 / (1.0 + rr));
    if (value < r.rhs) {
      r.rhs = value;
      r.best_r = rr;
    }
  }

  r.chain_cov = exact_covariance(s.spectrum, v, alpha / r.lambda1);
  const double tail = std::exp(-alpha * C);
  r.chain_middle = r.lhs + tail;
  r.chain_upper = r.rhs + tail;
  const double eps = 1e-12;
  r.holds = r.lhs <= r.rhs + eps && r.chain_cov <= r.chain_middle + eps &&
            r.chain_middle <= r.chain_upper + eps;
  return r;
}

ExclusionReport exclusion_sensitivity_report(const LayeredWalk& lw, const BooleanFunction& f,
                                             const std::vector<double>& t_grid,
                                             const std::vector<double>& deltas, double alpha) {
  ExclusionReport rep;
  rep.n = lw.n();
  for (double t : t_grid) {
    const CovarianceSplit c = covariance_split(lw, f, t);
    rep.rows.push_back({t, c.within, c.between, c.total});
  }
  const std::vector<double> inf = coordinate_influences(lw.n(), f);
  rep.sum_sq_influence = sum_squares(inf);
  for (double x : inf) rep.sum_influence += x;
  const double n = lw.n();
  rep.reference_shape = std::pow(std::log2(n) / std::sqrt(n), 2.0);
  for (double d : deltas) {
    require(d > 0.0, ErrorCode::invalid_argument, "delta must be positive");
    const double th = std::pow(n, -d);
    rep.thresholds.push_back({d, th, rep.sum_sq_influence < th});
  }
  rep.good = good_slice_set(lw, f, alpha);
  rep.level_mean_variance = level_mean_variance(lw, f);
  return rep;
}

}  // namespace noiselab
