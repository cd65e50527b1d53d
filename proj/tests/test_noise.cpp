#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "noiselab/boolean.hpp"
#include "noiselab/errors.hpp"
#include "noiselab/noise.hpp"
#include "oracles.hpp"

using namespace noiselab;

namespace {

struct Case {
  SchreierGraph g;
  Spectrum s;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  for (auto g : {build_torus(2, 4), build_torus(3, 2), build_johnson(5, 2), build_johnson(6, 3),
                 build_transposition_cayley(4)}) {
    Spectrum s = decompose(g);
    out.push_back({std::move(g), std::move(s)});
  }
  return out;
}

BooleanFunction named(const SchreierGraph& g, NamedFunctionSpec spec) { return make_named(g, spec); }

double influence_sq_mean(const SchreierGraph& g, const BooleanFunction& f) {
  return influence_profile(g, f).sum_of_squares / static_cast<double>(g.degree());
}

}  // namespace

TEST(Covariance, Examples) {
  const SchreierGraph g = build_torus(2, 2);
  const Spectrum s = decompose(g);
  const BooleanFunction par = named(g, {.kind = NamedKind::parity});
  EXPECT_NEAR(exact_covariance(s, par, 0.0), 0.25, 1e-15);
  for (double t : {0.1, 0.5, 1.0, 3.0}) EXPECT_NEAR(exact_covariance(s, par, t), 0.25 * std::exp(-2 * t), 1e-14);
  const BooleanFunction one = named(g, {.kind = NamedKind::constant, .value = 1});
  for (double t : {0.0, 1.0}) EXPECT_NEAR(exact_covariance(s, one, t), 0.0, 1e-15);
  EXPECT_THROW(exact_covariance(s, par, -1.0), Error);
}

TEST(Covariance, MatchesMatrixExponential) {
  std::mt19937_64 rng(1);
  for (const auto& c : cases())
    for (int rep = 0; rep < 5; ++rep) {
      const BooleanFunction f(oracle::random_bits(rng, c.g.size()), "r");
      for (double t : {0.1, 1.0, 5.0})
        EXPECT_NEAR(exact_covariance(c.s, f, t), oracle::covariance_by_expm(c.g, f.as_vector(), t), 1e-8);
    }
}

TEST(Covariance, MonotoneAndConvexInTime) {
  std::mt19937_64 rng(2);
  for (const auto& c : cases()) {
    const BooleanFunction f(oracle::random_bits(rng, c.g.size()), "r");
    std::vector<double> v;
    for (int k = 0; k <= 40; ++k) v.push_back(exact_covariance(c.s, f, 0.1 * k));
    for (std::size_t k = 1; k < v.size(); ++k) EXPECT_LE(v[k], v[k - 1] + 1e-15);
    for (std::size_t k = 1; k + 1 < v.size(); ++k) EXPECT_GE(v[k - 1] + v[k + 1] - 2 * v[k], -1e-14);
  }
}

TEST(LowFrequency, Examples) {
  const SchreierGraph g = build_torus(2, 2);
  const Spectrum s = decompose(g);
  const BooleanFunction d = named(g, {.kind = NamedKind::dictator, .index = 1});
  EXPECT_NEAR(low_frequency_weight(s, d, 1.5), 0.25, 1e-14);
  EXPECT_NEAR(low_frequency_weight(s, d, 3.0), mean_variance(d).variance, 1e-14);
  EXPECT_EQ(low_frequency_weight(s, d, s.gap()), 0.0);
  EXPECT_EQ(low_frequency_weight(s, d, 0.5), 0.0);
}

TEST(BksBound, Examples) {
  const BoundReport zero = bks_bound(0.5, 1.0, 0.0, 0.0, {.r = 0.5, .lambda = 1.0, .T = 1.0});
  EXPECT_EQ(zero.rhs, 0.0);

  const double r = std::exp(-1.0);
  const BoundReport b = bks_bound(0.5, 1.0, 0.04, 0.25, {.r = r, .lambda = 1.0, .T = 10.0});
  const double low = std::exp(1.0) * std::pow(0.04, 1.0 / (1.0 + r));
  EXPECT_NEAR(b.rhs_low_freq_term, low, 1e-13);
  EXPECT_NEAR(b.rhs_low_freq_term, 0.2583, 2e-4);  // displayed value is rounded
  EXPECT_NEAR(b.rhs_tail_term, 0.25 * std::exp(-10.0), 1e-18);
  EXPECT_NEAR(b.rhs, b.rhs_low_freq_term + b.rhs_tail_term, 1e-16);

  // r → 1 with Λ = ρ: exponential factor 1, exponent 1/2.
  const BoundReport lim = bks_bound(0.5, 1.0, 0.04, 0.0, {.r = 1.0 - 1e-12, .lambda = 1.0, .T = 1.0});
  EXPECT_NEAR(lim.rhs_low_freq_term, std::sqrt(0.04) / (2 * 0.5), 1e-9);
}

TEST(BksBound, RejectsBadParameters) {
  EXPECT_THROW(bks_bound(0.5, 1, 0, 0, {.r = 0.0}), Error);
  EXPECT_THROW(bks_bound(0.5, 1, 0, 0, {.r = 1.0}), Error);
  EXPECT_THROW(bks_bound(0.5, 1, 0, 0, {.lambda = 0.0}), Error);
  EXPECT_THROW(bks_bound(0.5, 1, 0, 0, {.T = -1.0}), Error);
  EXPECT_THROW(bks_bound(0.0, 1, 0, 0, {}), Error);
  EXPECT_THROW(bks_bound(0.5, 0, 0, 0, {}), Error);
}

TEST(CovarianceBound, ConstantParityAndTribes) {
  const SchreierGraph g = build_torus(2, 4);
  const Spectrum s = decompose(g);
  const double rho = estimate_log_sobolev(g, s).rho_hat;

  const BoundReport c = evaluate_bound(s, g, named(g, {.kind = NamedKind::constant}), rho, {});
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_EQ(c.rhs, 0.0);

  const BooleanFunction par = named(g, {.kind = NamedKind::parity});
  const BoundGrid grid = default_bound_grid(s.gap(), {1.0, 4.0, 16.0});
  for (double r : grid.r)
    for (double l : grid.lambda)
      for (double T : grid.T) EXPECT_GE(evaluate_bound(s, g, par, rho, {r, l, T}).slack, 0.0);

  const BooleanFunction tr = named(g, {.kind = NamedKind::tribes, .tribes = 2, .members = 2});
  const BoundReport b = evaluate_bound(s, g, tr, rho, {.r = 0.5, .lambda = s.gap(), .T = 4.0});
  EXPECT_GE(b.slack, 0.0);
  EXPECT_NEAR(b.lhs, exact_covariance(s, tr, 4.0), 1e-15);
}

TEST(CovarianceBound, DominanceOnRandomFunctions) {
  std::mt19937_64 rng(3);
  const std::vector<double> rs{0.1, 0.3, 0.5, 0.7, 0.9};
  for (const auto& c : cases()) {
    const double rho = estimate_log_sobolev(c.g, c.s, {.restarts = 8}).rho_hat;
    std::vector<double> ls;
    for (int k = -2; k <= 2; ++k) ls.push_back(c.s.gap() * std::ldexp(1.0, k));
    for (int rep = 0; rep < 40; ++rep) {
      const BooleanFunction f(oracle::random_bits(rng, c.g.size()), "r");
      for (double r : rs)
        for (double l : ls)
          for (double T : {0.5, 2.0, 8.0}) EXPECT_GE(evaluate_bound(c.s, c.g, f, rho, {r, l, T}).slack, -1e-9);
    }
  }
}

TEST(CovarianceBound, DerivationSplitAndPreSubstitutionForm) {
  std::mt19937_64 rng(4);
  for (const auto& c : cases()) {
    const double rho = estimate_log_sobolev(c.g, c.s, {.restarts = 8}).rho_hat;
    for (int rep = 0; rep < 20; ++rep) {
      const BooleanFunction f(oracle::random_bits(rng, c.g.size()), "r");
      const double var = mean_variance(f).variance;
      const double isq = influence_sq_mean(c.g, f);
      for (double l : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double low = low_frequency_weight(c.s, f, l);
        for (double T : {0.5, 2.0, 8.0})
          EXPECT_LE(exact_covariance(c.s, f, T), low + var * std::exp(-l * T) + 1e-12);
        for (double t : {0.05, 0.2, 1.0}) {
          const double bound = std::exp(2 * l * t) / (2 * c.s.gap()) * std::pow(isq, 1.0 / (1.0 + std::exp(-2 * rho * t)));
          EXPECT_LE(low, bound * (1 + 1e-9));
        }
      }
    }
  }
}

TEST(OptimizeBound, SinglePointAndConstant) {
  const SchreierGraph g = build_torus(2, 4);
  const Spectrum s = decompose(g);
  const BooleanFunction tr = named(g, {.kind = NamedKind::tribes, .tribes = 2, .members = 2});
  const OptimizedBound one = optimize_bound(s, g, tr, 0.5, {{0.3}, {0.7}, {2.0}});
  EXPECT_EQ(one.evaluated, 1u);
  EXPECT_EQ(one.best.params.r, 0.3);
  EXPECT_EQ(one.best.params.lambda, 0.7);
  EXPECT_EQ(one.best.params.T, 2.0);

  const BoundGrid grid = default_bound_grid(s.gap(), {4.0});
  const OptimizedBound c = optimize_bound(s, g, named(g, {.kind = NamedKind::constant}), 0.5, grid);
  EXPECT_EQ(c.best.rhs, 0.0);
  EXPECT_EQ(c.best.params.r, grid.r.front());
  EXPECT_EQ(c.best.params.lambda, grid.lambda.front());
}

TEST(OptimizeBound, ExhaustiveRecheckAndThreadInvariance) {
  const SchreierGraph g = build_torus(2, 4);
  const Spectrum s = decompose(g);
  const BooleanFunction tr = named(g, {.kind = NamedKind::tribes, .tribes = 2, .members = 2});
  const BoundGrid grid = default_bound_grid(s.gap(), {4.0});
  const OptimizedBound best = optimize_bound(s, g, tr, 0.5, grid, 1);
  EXPECT_EQ(best.evaluated, grid.r.size() * grid.lambda.size());
  for (double r : grid.r)
    for (double l : grid.lambda) EXPECT_LE(best.best.rhs, evaluate_bound(s, g, tr, 0.5, {r, l, 4.0}).rhs);
  const OptimizedBound par = optimize_bound(s, g, tr, 0.5, grid, 8);
  EXPECT_EQ(par.best.rhs, best.best.rhs);
  EXPECT_EQ(par.best.params.r, best.best.params.r);
  EXPECT_EQ(par.best.params.lambda, best.best.params.lambda);
}

TEST(EigenspaceIdentity, HoldsOnEveryEigenspace) {
  std::mt19937_64 rng(5);
  for (const auto& c : cases())
    for (int rep = 0; rep < 30; ++rep) {
      const BooleanFunction f(oracle::random_bits(rng, c.g.size()), "r");
      const EigenspaceIdentityReport r = check_eigenspace_identity(c.s, c.g, f.as_vector());
      EXPECT_TRUE(r.pass);
      EXPECT_EQ(r.rows.size(), c.s.eigenspaces().size());
    }
}

TEST(EigenspaceIdentity, HammingCubeHoldsPerCharacter) {
  std::mt19937_64 rng(6);
  for (int n = 1; n <= 5; ++n) {
    const SchreierGraph g = build_torus(2, n);
    const auto chars = hypercube_characters(g);
    ASSERT_EQ(chars.size(), g.size());
    for (int rep = 0; rep < 10; ++rep) {
      const BooleanFunction f(oracle::random_bits(rng, g.size()), "r");
      for (const auto& ch : chars) {
        const PerVectorIdentity pv = per_vector_identity(g, f.as_vector(), ch.values);
        EXPECT_NEAR(pv.eigenvalue, ch.eigenvalue, 1e-12);
        EXPECT_LT(pv.eigen_residual, 1e-12);
        EXPECT_TRUE(pv.equal) << "n=" << n << " S=" << ch.subset;
      }
    }
  }
}

TEST(EigenspaceIdentity, S4SingleVectorFailsFullEigenspaceHolds) {
  const SchreierGraph g = build_transposition_cayley(4);
  const Spectrum s = decompose(g);
  const BooleanFunction f = named(g, {.kind = NamedKind::fixes, .index = 1, .image = 1});
  Eigen::VectorXd psi(24);
  for (StateIndex x = 0; x < 24; ++x) psi[x] = g.states().decode(x)[0] <= 2 ? 1.0 : -1.0;

  // Independent enumeration of Σ_u ⟨L_u f, ψ⟩² with (i j) swapping positions.
  double rhs = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double acc = 0.0;
      for (StateIndex x = 0; x < 24; ++x) {
        std::vector<int> p = g.states().decode(x);
        const double fx = p[0] == 1;
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        acc += (fx - (p[0] == 1)) * psi[x];
      }
      rhs += (acc / 24) * (acc / 24);
    }

  const PerVectorIdentity pv = per_vector_identity(g, f.as_vector(), psi);
  EXPECT_NEAR(pv.eigenvalue, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(pv.coefficient, 0.25, 1e-12);
  EXPECT_NEAR(pv.lhs, 0.5, 1e-12);
  EXPECT_NEAR(pv.rhs, rhs, 1e-12);
  EXPECT_NEAR(pv.rhs, 1.0 / 3.0, 1e-12);
  EXPECT_FALSE(pv.equal);

  const EigenspaceIdentityReport r = check_eigenspace_identity(s, g, f.as_vector());
  EXPECT_TRUE(r.pass);
  for (const auto& row : r.rows) {
    if (std::abs(row.eigenvalue - 2.0 / 3.0) < 1e-9) {
      EXPECT_NEAR(row.lhs, row.rhs, 1e-8);
    }
  }
}

TEST(Sensitivity, Examples) {
  const SchreierGraph g = build_torus(2, 2);
  const Spectrum s = decompose(g);
  const SensitivityProfile p = sensitivity_profile(s, named(g, {.kind = NamedKind::parity}), 1.0, {0.0, 1.0, 2.0}, {1.0, 3.0});
  EXPECT_NEAR(p.rows[0].cov, 0.25, 1e-15);
  EXPECT_NEAR(p.rows[1].cov, 0.25 * std::exp(-2.0), 1e-14);
  EXPECT_NEAR(p.rows[2].cov, 0.25 * std::exp(-4.0), 1e-14);
  EXPECT_NEAR(p.diagnostics[0].low_freq_weight, 0.0, 1e-30);
  EXPECT_NEAR(p.diagnostics[1].low_freq_weight, 0.25, 1e-14);
  const SensitivityProfile c = sensitivity_profile(s, named(g, {.kind = NamedKind::constant}), 2.0, {0.0, 0.5});
  for (const auto& row : c.rows) EXPECT_NEAR(row.cov, 0.0, 1e-15);
}

TEST(Rho, SourcePrecedence) {
  const SchreierGraph t = build_torus(2, 3);
  const Spectrum ts = decompose(t);
  const RhoChoice user = resolve_rho(t, ts, 0.1);
  EXPECT_EQ(user.source, RhoSource::user);
  EXPECT_EQ(user.rho, 0.1);
  const RhoChoice fam = resolve_rho(t, ts, std::nullopt);
  EXPECT_EQ(fam.source, RhoSource::family_bound);
  EXPECT_NEAR(fam.rho, 4 * std::numbers::pi * std::numbers::pi / (5.0 * 4 * 3), 1e-15);
  const RhoChoice num = resolve_rho(t, ts, std::nullopt, false);
  EXPECT_EQ(num.source, RhoSource::numerical);
  ASSERT_TRUE(num.estimate.has_value());
  EXPECT_EQ(num.rho, num.estimate->rho_hat);

  const SchreierGraph j = build_johnson(5, 2);
  EXPECT_FALSE(family_rho_bound(j).has_value());
  EXPECT_EQ(resolve_rho(j, decompose(j), std::nullopt).source, RhoSource::numerical);
  EXPECT_THROW(resolve_rho(t, ts, -1.0), Error);
}
