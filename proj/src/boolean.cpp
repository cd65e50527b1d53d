#include "noiselab/boolean.hpp"

#include <algorithm>
#include <numeric>

#include "noiselab/errors.hpp"

namespace noiselab {

BooleanFunction::BooleanFunction(std::vector<std::uint8_t> values, std::string name)
    : values_(std::move(values)), name_(std::move(name)) {
  require(!values_.empty(), ErrorCode::invalid_argument, "empty Boolean function");
  for (auto v : values_)
    require(v == 0 || v == 1, ErrorCode::invalid_argument, "Boolean values must be 0 or 1");
}

std::size_t BooleanFunction::ones() const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), 1));
}

Eigen::VectorXd BooleanFunction::as_vector() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) v[static_cast<Eigen::Index>(i)] = values_[i];
  return v;
}

namespace {

std::string describe(const NamedFunctionSpec& spec) {
  switch (spec.kind) {
    case NamedKind::constant: return "constant:c=" + std::to_string(spec.value);
    case NamedKind::dictator: return "dictator:i=" + std::to_string(spec.index);
    case NamedKind::parity: return "parity";
    case NamedKind::majority: return "majority";
    case NamedKind::tribes:
      return "tribes:l=" + std::to_string(spec.tribes) + ",k=" + std::to_string(spec.members);
    case NamedKind::slice: return "slice:m=" + std::to_string(spec.level);
    case NamedKind::fixes:
      return "fixes:i=" + std::to_string(spec.index) + ",j=" + std::to_string(spec.image);
  }
  return "?";
}

}  // namespace

BooleanFunction make_named(const SchreierGraph& g, const NamedFunctionSpec& spec) {
  const StateSpace& states = g.states();
  const std::size_t size = g.size();
  std::vector<std::uint8_t> values(size, 0);

  if (spec.kind == NamedKind::constant) {
    require(spec.value == 0 || spec.value == 1, ErrorCode::invalid_argument,
            "constant must be 0 or 1");
    std::fill(values.begin(), values.end(), static_cast<std::uint8_t>(spec.value));
    return {std::move(values), describe(spec)};
  }

  if (spec.kind == NamedKind::fixes) {
    require(states.tag().family == Family::sym_cayley, ErrorCode::invalid_argument,
            "fixes needs a symmetric-group state set");
    const int n = states.word_length();
    require(spec.index >= 1 && spec.index <= n && spec.image >= 1 && spec.image <= n,
            ErrorCode::invalid_argument, "fixes indices out of range");
    for (std::size_t w = 0; w < size; ++w)
      values[w] = states.decode(static_cast<StateIndex>(w))[spec.index - 1] == spec.image;
    return {std::move(values), describe(spec)};
  }

  require(states.has_binary_words(), ErrorCode::invalid_argument,
          describe(spec) + " needs a state set of binary words");
  const int n = states.word_length();
  switch (spec.kind) {
    case NamedKind::dictator:
      require(spec.index >= 1 && spec.index <= n, ErrorCode::invalid_argument,
              "dictator coordinate out of range");
      break;
    case NamedKind::tribes:
      require(spec.tribes >= 1 && spec.members >= 1 && spec.tribes * spec.members == n,
              ErrorCode::invalid_argument, "tribes needs l*k equal to the word length");
      break;
    case NamedKind::slice:
      require(spec.level >= 0 && spec.level <= n, ErrorCode::invalid_argument,
              "slice level out of range");
      break;
    default:
      break;
  }

  for (std::size_t w = 0; w < size; ++w) {
    const std::vector<int> bits = states.decode(static_cast<StateIndex>(w));
    const int weight = std::accumulate(bits.begin(), bits.end(), 0);
    bool v = false;
    switch (spec.kind) {
      case NamedKind::dictator: v = bits[spec.index - 1] == 1; break;
      case NamedKind::parity: v = weight % 2 == 1; break;
      case NamedKind::majority: v = 2 * weight > n; break;
      case NamedKind::slice: v = weight == spec.level; break;
      case NamedKind::tribes:
        for (int t = 0; t < spec.tribes && !v; ++t) {
          bool all = true;
          for (int k = 0; k < spec.members; ++k) all = all && bits[t * spec.members + k] == 1;
          v = all;
        }
        break;
      default: break;
    }
    values[w] = v;
  }
  return {std::move(values), describe(spec)};
}

std::size_t influence_count(const SchreierGraph& g, const BooleanFunction& f, std::size_t u) {
  require(f.size() == g.size(), ErrorCode::invalid_argument,
          "function size does not match the graph");
  require(u < g.degree(), ErrorCode::invalid_argument, "generator index out of range");
  const auto image = g.image(u);
  std::size_t count = 0;
  for (std::size_t w = 0; w < f.size(); ++w) count += f[w] != f[image[w]];
  return count;
}

double influence(const SchreierGraph& g, const BooleanFunction& f, std::size_t u) {
  return static_cast<double>(influence_count(g, f, u)) / static_cast<double>(g.size());
}

InfluenceProfile influence_profile(const SchreierGraph& g, const BooleanFunction& f) {
  InfluenceProfile p;
  p.size = g.size();
  for (std::size_t u = 0; u < g.degree(); ++u) {
    p.counts.push_back(influence_count(g, f, u));
    const double i = static_cast<double>(p.counts.back()) / static_cast<double>(p.size);
    p.per_generator.push_back(i);
    p.total += i;
    p.sum_of_squares += i * i;
  }
  return p;
}

FourierExpansion fourier(const Spectrum& s, const Eigen::VectorXd& f) {
  return {s.coefficients(f), s.fingerprint()};
}

FourierExpansion fourier(const Spectrum& s, const BooleanFunction& f) {
  return fourier(s, f.as_vector());
}

Eigen::VectorXd synthesize(const Spectrum& s, const FourierExpansion& e) {
  require(e.spectrum_fingerprint == s.fingerprint(), ErrorCode::invalid_argument,
          "expansion was computed against a different spectrum");
  return s.eigenvectors() * e.coefficients;
}

MeanVariance mean_variance(const BooleanFunction& f) {
  const double mean = static_cast<double>(f.ones()) / static_cast<double>(f.size());
  return {mean, mean * (1.0 - mean)};
}

}  // namespace noiselab
