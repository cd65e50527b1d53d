#include <gtest/gtest.h>

#include <random>

#include "noiselab/boolean.hpp"
#include "noiselab/errors.hpp"
#include "oracles.hpp"

using namespace noiselab;

namespace {

BooleanFunction named(const SchreierGraph& g, NamedFunctionSpec spec) { return make_named(g, spec); }

StateIndex word(const SchreierGraph& g, std::vector<int> bits) { return g.states().encode(bits); }

std::vector<SchreierGraph> test_graphs() {
  std::vector<SchreierGraph> out;
  out.push_back(build_torus(2, 4));
  out.push_back(build_torus(3, 2));
  out.push_back(build_johnson(5, 2));
  out.push_back(build_johnson(6, 3));
  out.push_back(build_transposition_cayley(4));
  return out;
}

}  // namespace

TEST(MakeNamed, Dictator) {
  const SchreierGraph g = build_torus(2, 3);
  const BooleanFunction f = named(g, {.kind = NamedKind::dictator, .index = 1});
  for (StateIndex x = 0; x < g.size(); ++x) EXPECT_EQ(f[x], g.states().decode(x)[0]);
}

TEST(MakeNamed, Tribes) {
  const SchreierGraph g = build_torus(2, 4);
  const BooleanFunction f = named(g, {.kind = NamedKind::tribes, .tribes = 2, .members = 2});
  EXPECT_EQ(f[word(g, {1, 1, 0, 0})], 1);
  EXPECT_EQ(f[word(g, {1, 0, 1, 0})], 0);
  EXPECT_EQ(f[word(g, {0, 0, 1, 1})], 1);
  EXPECT_THROW(named(g, {.kind = NamedKind::tribes, .tribes = 3, .members = 2}), Error);
}

TEST(MakeNamed, ParityCanonicalOrder) {
  const BooleanFunction f = named(build_torus(2, 2), {.kind = NamedKind::parity});
  EXPECT_EQ(f.values(), (std::vector<std::uint8_t>{0, 1, 1, 0}));
}

TEST(MakeNamed, MajorityAndSliceTieBreaks) {
  const SchreierGraph g = build_torus(2, 4);
  const BooleanFunction maj = named(g, {.kind = NamedKind::majority});
  EXPECT_EQ(maj[word(g, {1, 1, 0, 0})], 0);
  EXPECT_EQ(maj[word(g, {1, 1, 1, 0})], 1);
  const BooleanFunction sl = named(g, {.kind = NamedKind::slice, .level = 2});
  EXPECT_EQ(sl.ones(), 6u);
}

TEST(MakeNamed, FixesOnSym) {
  const SchreierGraph g = build_transposition_cayley(4);
  const BooleanFunction f = named(g, {.kind = NamedKind::fixes, .index = 1, .image = 1});
  EXPECT_EQ(f.ones(), 6u);
  for (StateIndex x = 0; x < g.size(); ++x) EXPECT_EQ(f[x], g.states().decode(x)[0] == 1);
  EXPECT_THROW(named(build_torus(2, 2), {.kind = NamedKind::fixes}), Error);
}

TEST(Influence, DictatorAndParity) {
  const SchreierGraph g = build_torus(2, 3);
  const BooleanFunction d = named(g, {.kind = NamedKind::dictator, .index = 1});
  EXPECT_EQ(influence(g, d, 0), 1.0);
  EXPECT_EQ(influence(g, d, 1), 0.0);
  EXPECT_EQ(influence(g, d, 2), 0.0);
  for (int n = 1; n <= 8; ++n) {
    const SchreierGraph c = build_torus(2, n);
    const InfluenceProfile p = influence_profile(c, named(c, {.kind = NamedKind::parity}));
    for (double i : p.per_generator) EXPECT_EQ(i, 1.0);
    EXPECT_EQ(p.total, static_cast<double>(n));
  }
}

TEST(Influence, TribesClosedFormExact) {
  for (auto [l, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {4, 2}, {3, 3}}) {
    const SchreierGraph g = build_torus(2, l * k);
    const BooleanFunction f = named(g, {.kind = NamedKind::tribes, .tribes = l, .members = k});
    const oracle::Fraction want = oracle::tribes_influence(l, k);
    for (std::size_t u = 0; u < g.degree(); ++u)
      EXPECT_TRUE(oracle::equal({influence_count(g, f, u), g.size()}, want)) << l << "," << k;
  }
  const SchreierGraph g = build_torus(2, 4);
  EXPECT_EQ(influence(g, named(g, {.kind = NamedKind::tribes, .tribes = 2, .members = 2}), 0), 3.0 / 8.0);
}

TEST(Influence, InverseGeneratorsAgree) {
  std::mt19937_64 rng(2);
  for (const auto& g : test_graphs()) {
    const BooleanFunction f(oracle::random_bits(rng, g.size()), "r");
    for (std::size_t u = 0; u < g.degree(); ++u)
      EXPECT_EQ(influence_count(g, f, u), influence_count(g, f, *g.generators().inverse_of(u)));
  }
}

TEST(Influence, DifferenceIdentities) {
  std::mt19937_64 rng(4);
  for (const auto& g : test_graphs()) {
    const BooleanFunction f(oracle::random_bits(rng, g.size()), "r");
    const Eigen::VectorXd v = f.as_vector();
    for (std::size_t u = 0; u < g.degree(); ++u) {
      const Eigen::VectorXd d = apply_difference(g, v, u);
      EXPECT_NEAR(2.0 * inner(d, v), influence(g, f, u), 1e-12);
      EXPECT_NEAR(inner(d, d), influence(g, f, u), 1e-12);
    }
  }
}

TEST(Fourier, Examples) {
  const SchreierGraph sq = build_torus(2, 2);
  const Spectrum s = decompose(sq);
  const FourierExpansion one = fourier(s, named(sq, {.kind = NamedKind::constant, .value = 1}));
  EXPECT_NEAR(one.coefficients[0], 1.0, 1e-15);
  for (Eigen::Index j = 1; j < 4; ++j) EXPECT_NEAR(one.coefficients[j], 0.0, 1e-15);

  const FourierExpansion par = fourier(s, named(sq, {.kind = NamedKind::parity}));
  EXPECT_NEAR(par.coefficients[0], 0.5, 1e-15);
  double w1 = 0, w2 = 0;
  for (std::size_t j = 1; j < 4; ++j) {
    const double c2 = par.coefficients[static_cast<Eigen::Index>(j)] * par.coefficients[static_cast<Eigen::Index>(j)];
    if (std::abs(s.eigenvalue(j) - 1.0) < 1e-9) w1 += c2;
    if (std::abs(s.eigenvalue(j) - 2.0) < 1e-9) w2 += c2;
  }
  EXPECT_NEAR(w1, 0.0, 1e-14);
  EXPECT_NEAR(w2, 0.25, 1e-14);
}

TEST(Fourier, S4SignVectorCoefficient) {
  const SchreierGraph g = build_transposition_cayley(4);
  const BooleanFunction f = named(g, {.kind = NamedKind::fixes, .index = 1, .image = 1});
  Eigen::VectorXd psi(24);
  for (StateIndex x = 0; x < 24; ++x) psi[x] = g.states().decode(x)[0] <= 2 ? 1.0 : -1.0;
  EXPECT_NEAR(inner(f.as_vector(), psi), 0.25, 1e-15);
}

TEST(Fourier, MeanParsevalAndSynthesis) {
  std::mt19937_64 rng(6);
  for (const auto& g : test_graphs()) {
    const Spectrum s = decompose(g);
    for (int rep = 0; rep < 20; ++rep) {
      const BooleanFunction f(oracle::random_bits(rng, g.size()), "r");
      const FourierExpansion e = fourier(s, f);
      const MeanVariance mv = mean_variance(f);
      EXPECT_NEAR(e.coefficients[0], mv.mean, 1e-12);
      EXPECT_NEAR(e.coefficients.tail(e.coefficients.size() - 1).squaredNorm(), mv.variance, 1e-10);
      EXPECT_LT((synthesize(s, e) - f.as_vector()).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Fourier, SynthesisRejectsForeignSpectrum) {
  const SchreierGraph a = build_torus(2, 2), b = build_torus(4, 1);
  const FourierExpansion e = fourier(decompose(a), named(a, {.kind = NamedKind::parity}));
  EXPECT_THROW(synthesize(decompose(b), e), Error);
}

TEST(Fourier, GeneratorSumIdentityPerEigenvector) {
  std::mt19937_64 rng(9);
  for (const auto& g : test_graphs()) {
    const Spectrum s = decompose(g);
    const BooleanFunction f(oracle::random_bits(rng, g.size()), "r");
    const Eigen::VectorXd v = f.as_vector();
    const Eigen::VectorXd c = s.coefficients(v);
    Eigen::VectorXd sum_diff = Eigen::VectorXd::Zero(v.size());
    for (std::size_t u = 0; u < g.degree(); ++u) sum_diff += apply_difference(g, v, u);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double lhs = inner(sum_diff, s.vector(i));
      EXPECT_NEAR(lhs, s.eigenvalue(i) * static_cast<double>(g.degree()) * c[static_cast<Eigen::Index>(i)], 1e-8);
    }
  }
}

TEST(MeanVariance, Examples) {
  const SchreierGraph g = build_torus(2, 4);
  const MeanVariance c = mean_variance(named(g, {.kind = NamedKind::constant, .value = 1}));
  EXPECT_EQ(c.mean, 1.0);
  EXPECT_EQ(c.variance, 0.0);
  const MeanVariance p = mean_variance(named(g, {.kind = NamedKind::parity}));
  EXPECT_EQ(p.mean, 0.5);
  EXPECT_EQ(p.variance, 0.25);
  const MeanVariance t = mean_variance(named(g, {.kind = NamedKind::tribes, .tribes = 2, .members = 2}));
  EXPECT_EQ(t.mean, 7.0 / 16.0);
  EXPECT_EQ(t.variance, 63.0 / 256.0);
}
