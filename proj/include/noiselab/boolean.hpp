#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "noiselab/graph.hpp"
#include "noiselab/spectral.hpp"

namespace noiselab {

/// f : S → {0,1}, one value per state index.
class BooleanFunction {
 public:
  BooleanFunction() = default;
  BooleanFunction(std::vector<std::uint8_t> values, std::string name);

  std::size_t size() const { return values_.size(); }
  const std::vector<std::uint8_t>& values() const { return values_; }
  std::uint8_t operator[](std::size_t i) const { return values_[i]; }
  const std::string& name() const { return name_; }
  std::size_t ones() const;

  Eigen::VectorXd as_vector() const;

 private:
  std::vector<std::uint8_t> values_;
  std::string name_;
};

enum class NamedKind { constant, dictator, parity, majority, tribes, slice, fixes };

struct NamedFunctionSpec {
  NamedKind kind = NamedKind::constant;
  int value = 1;   ///< constant: 0 or 1
  int index = 1;   ///< dictator: 1-based coordinate
  int tribes = 0;  ///< tribes: ℓ
  int members = 0; ///< tribes: k
  int level = 0;   ///< slice: weight m
  int image = 1;   ///< fixes: 1_{σ(index) = image} on sym_cayley
};

/// Tribe t (1-based) owns coordinates (t−1)k+1 .. tk. Majority and the slice
/// indicator break ties toward 0.
BooleanFunction make_named(const SchreierGraph& g, const NamedFunctionSpec& spec);

/// Number of states w with f(w) ≠ f(w_u).
std::size_t influence_count(const SchreierGraph& g, const BooleanFunction& f, std::size_t u);
double influence(const SchreierGraph& g, const BooleanFunction& f, std::size_t u);

struct InfluenceProfile {
  std::vector<std::size_t> counts;  ///< numerators over |S|
  std::size_t size = 0;
  std::vector<double> per_generator;
  double total = 0.0;
  double sum_of_squares = 0.0;
};

InfluenceProfile influence_profile(const SchreierGraph& g, const BooleanFunction& f);

struct FourierExpansion {
  Eigen::VectorXd coefficients;
  std::uint64_t spectrum_fingerprint = 0;
};

FourierExpansion fourier(const Spectrum& s, const BooleanFunction& f);
FourierExpansion fourier(const Spectrum& s, const Eigen::VectorXd& f);

/// Σ_j \hat f(j) ψ_j.
Eigen::VectorXd synthesize(const Spectrum& s, const FourierExpansion& e);

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;
};

MeanVariance mean_variance(const BooleanFunction& f);

}  // namespace noiselab
