#include "noiselab/graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "noiselab/combinatorics.hpp"
#include "noiselab/errors.hpp"

namespace noiselab {

namespace {

void check_cap(std::uint64_t size, std::size_t cap, const std::string& what) {
  if (size > cap) {
    std::ostringstream msg;
    msg << what << " has " << size << " states, above the cap of " << cap
        << " (raise max_states to override)";
    throw_error(ErrorCode::size_limit, msg.str());
  }
}

std::vector<int> unrank_permutation(std::uint64_t rank, int n) {
  std::vector<int> available(n);
  std::iota(available.begin(), available.end(), 1);
  std::vector<int> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t f = factorial(static_cast<unsigned>(n - 1 - i));
    const auto q = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(available[q]);
    available.erase(available.begin() + static_cast<std::ptrdiff_t>(q));
  }
  return out;
}

std::uint64_t rank_permutation(std::span<const int> perm) {
  const int n = static_cast<int>(perm.size());
  std::uint64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (perm[j] < perm[i]) ++smaller;
    rank += smaller * factorial(static_cast<unsigned>(n - 1 - i));
  }
  return rank;
}

bool is_bijection(const Permutation& p, std::size_t size) {
  if (p.size() != size) return false;
  std::vector<bool> seen(size, false);
  for (StateIndex y : p) {
    if (y >= size || seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

bool is_identity(const Permutation& p) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] != x) return false;
  return true;
}

Permutation inverse(const Permutation& p) {
  Permutation inv(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) inv[p[x]] = static_cast<StateIndex>(x);
  return inv;
}

std::string transposition_label(int i, int j) {
  return "(" + std::to_string(i) + " " + std::to_string(j) + ")";
}

}  // namespace

std::string FamilyTag::describe() const {
  std::ostringstream os;
  switch (family) {
    case Family::torus: os << "torus(m=" << first << ",n=" << second << ")"; break;
    case Family::hypercube: os << "hypercube(n=" << first << ")"; break;
    case Family::johnson: os << "johnson(n=" << first << ",m=" << second << ")"; break;
    case Family::sym_cayley: os << "sym(n=" << first << ")"; break;
    case Family::custom: os << "custom"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// StateSpace

StateSpace::StateSpace(std::size_t size, FamilyTag tag) : size_(size), tag_(tag) {
  require(size >= 1, ErrorCode::invalid_argument, "state space must be nonempty");
  if (tag_.family == Family::johnson) {
    const int n = tag_.first;
    const int m = tag_.second;
    words_.reserve(size);
    if (m == 0) {
      words_.push_back(0);
    } else {
      // Gosper's hack enumerates popcount-m words in ascending order.
      std::uint64_t v = (std::uint64_t{1} << m) - 1;
      const std::uint64_t limit = std::uint64_t{1} << n;
      while (v < limit) {
        words_.push_back(static_cast<std::uint32_t>(v));
        const std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
      }
    }
    require(words_.size() == size, ErrorCode::invalid_argument,
            "johnson state count does not match C(n,m)");
  }
}

bool StateSpace::has_binary_words() const {
  return tag_.family == Family::hypercube || tag_.family == Family::johnson ||
         (tag_.family == Family::torus && tag_.first == 2);
}

int StateSpace::word_length() const {
  switch (tag_.family) {
    case Family::torus: return tag_.second;
    case Family::hypercube:
    case Family::johnson:
    case Family::sym_cayley: return tag_.first;
    case Family::custom: return 1;
  }
  return 1;
}

std::vector<int> StateSpace::decode(StateIndex index) const {
  require(index < size_, ErrorCode::invalid_argument, "state index out of range");
  switch (tag_.family) {
    case Family::torus:
    case Family::hypercube: {
      const int m = tag_.family == Family::torus ? tag_.first : 2;
      const int n = word_length();
      std::vector<int> coords(n);
      std::uint64_t rest = index;
      for (int k = 0; k < n; ++k) {
        coords[k] = static_cast<int>(rest % m);
        rest /= m;
      }
      return coords;
    }
    case Family::johnson: {
      const int n = tag_.first;
      std::vector<int> bits(n);
      const std::uint32_t w = words_[index];
      for (int k = 0; k < n; ++k) bits[k] = static_cast<int>((w >> (n - 1 - k)) & 1u);
      return bits;
    }
    case Family::sym_cayley:
      return unrank_permutation(index, tag_.first);
    case Family::custom:
      return {static_cast<int>(index)};
  }
  return {};
}

StateIndex StateSpace::encode(std::span<const int> label) const {
  switch (tag_.family) {
    case Family::torus:
    case Family::hypercube: {
      const int m = tag_.family == Family::torus ? tag_.first : 2;
      require(static_cast<int>(label.size()) == word_length(),
              ErrorCode::invalid_argument, "label length mismatch");
      std::uint64_t index = 0;
      for (int k = word_length() - 1; k >= 0; --k) {
        require(label[k] >= 0 && label[k] < m, ErrorCode::invalid_argument,
                "torus coordinate out of range");
        index = index * m + static_cast<std::uint64_t>(label[k]);
      }
      return static_cast<StateIndex>(index);
    }
    case Family::johnson: {
      const int n = tag_.first;
      require(static_cast<int>(label.size()) == n, ErrorCode::invalid_argument,
              "label length mismatch");
      std::uint32_t w = 0;
      for (int k = 0; k < n; ++k) {
        require(label[k] == 0 || label[k] == 1, ErrorCode::invalid_argument,
                "johnson label must be binary");
        w = (w << 1) | static_cast<std::uint32_t>(label[k]);
      }
      auto it = std::lower_bound(words_.begin(), words_.end(), w);
      require(it != words_.end() && *it == w, ErrorCode::invalid_argument,
              "word has the wrong weight for this slice");
      return static_cast<StateIndex>(it - words_.begin());
    }
    case Family::sym_cayley: {
      std::vector<int> sorted(label.begin(), label.end());
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i)
        require(sorted[i] == static_cast<int>(i) + 1, ErrorCode::invalid_argument,
                "label is not a permutation of 1..n");
      require(static_cast<int>(label.size()) == tag_.first,
              ErrorCode::invalid_argument, "label length mismatch");
      return static_cast<StateIndex>(rank_permutation(label));
    }
    case Family::custom:
      require(label.size() == 1 && label[0] >= 0 &&
                  static_cast<std::size_t>(label[0]) < size_,
              ErrorCode::invalid_argument, "custom label out of range");
      return static_cast<StateIndex>(label[0]);
  }
  return 0;
}

std::string StateSpace::label(StateIndex index) const {
  const auto parts = decode(index);
  std::ostringstream os;
  switch (tag_.family) {
    case Family::hypercube:
    case Family::johnson:
      for (int b : parts) os << b;
      break;
    case Family::torus:
      if (tag_.first == 2) {
        for (int b : parts) os << b;
      } else {
        os << "(";
        for (std::size_t k = 0; k < parts.size(); ++k) os << (k ? "," : "") << parts[k];
        os << ")";
      }
      break;
    case Family::sym_cayley:
      for (int v : parts) os << v;
      break;
    case Family::custom:
      os << index;
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// GeneratorSet

GeneratorSet::GeneratorSet(std::vector<Generator> generators)
    : generators_(std::move(generators)) {
  std::map<Permutation, std::size_t> first_index;
  for (std::size_t u = 0; u < generators_.size(); ++u)
    first_index.emplace(generators_[u].image, u);
  inverse_index_.resize(generators_.size());
  for (std::size_t u = 0; u < generators_.size(); ++u) {
    const Permutation inv = inverse(generators_[u].image);
    if (inv == generators_[u].image) {
      inverse_index_[u] = u;
      continue;
    }
    auto it = first_index.find(inv);
    if (it != first_index.end()) inverse_index_[u] = it->second;
  }
}

std::optional<std::size_t> GeneratorSet::inverse_of(std::size_t u) const {
  return inverse_index_.at(u);
}

bool GeneratorSet::inverse_closed() const {
  return std::all_of(inverse_index_.begin(), inverse_index_.end(),
                     [](const auto& v) { return v.has_value(); });
}

// ---------------------------------------------------------------------------
// SchreierGraph

SchreierGraph::SchreierGraph(StateSpace states, GeneratorSet gens)
    : states_(std::move(states)), gens_(std::move(gens)) {
  require(gens_.size() >= 1, ErrorCode::validation,
          "a Schreier graph needs at least one generator");
  for (std::size_t u = 0; u < gens_.size(); ++u)
    require(is_bijection(gens_[u].image, states_.size()), ErrorCode::validation,
            "generator " + gens_[u].label + " is not a permutation of the state set");
}

StateIndex apply_generator(const SchreierGraph& g, StateIndex state, std::size_t u) {
  require(state < g.size(), ErrorCode::invalid_argument, "state index out of range");
  require(u < g.degree(), ErrorCode::invalid_argument, "generator index out of range");
  return g.apply(state, u);
}

// ---------------------------------------------------------------------------
// Builders

SchreierGraph build_torus(int m, int n, BuildOptions options) {
  require(m >= 2, ErrorCode::invalid_argument, "torus needs m >= 2");
  require(n >= 1, ErrorCode::invalid_argument, "torus needs n >= 1");
  std::uint64_t size = 1;
  for (int k = 0; k < n; ++k) {
    size *= static_cast<std::uint64_t>(m);
    if (size > options.max_states) check_cap(size, options.max_states, "torus");
  }
  check_cap(size, options.max_states, "torus");

  std::vector<Generator> gens;
  std::uint64_t stride = 1;
  for (int k = 0; k < n; ++k) {
    const std::vector<int> steps = m == 2 ? std::vector<int>{1} : std::vector<int>{1, m - 1};
    for (int step : steps) {
      Generator gen;
      gen.image.resize(size);
      for (std::uint64_t x = 0; x < size; ++x) {
        const auto digit = static_cast<int>((x / stride) % m);
        const int moved = (digit + step) % m;
        gen.image[x] = static_cast<StateIndex>(x + (static_cast<std::int64_t>(moved) - digit) *
                                                       static_cast<std::int64_t>(stride));
      }
      if (m == 2)
        gen.label = "e" + std::to_string(k + 1);
      else
        gen.label = (step == 1 ? "+e" : "-e") + std::to_string(k + 1);
      gens.push_back(std::move(gen));
    }
    stride *= static_cast<std::uint64_t>(m);
  }
  return SchreierGraph(StateSpace(size, {Family::torus, m, n}), GeneratorSet(std::move(gens)));
}

SchreierGraph build_hypercube(int n, BuildOptions options) {
  SchreierGraph t = build_torus(2, n, options);
  return SchreierGraph(StateSpace(t.size(), {Family::hypercube, n, 0}), t.generators());
}

SchreierGraph build_johnson(int n, int m, BuildOptions options) {
  require(n >= 2 && n <= 30, ErrorCode::invalid_argument, "johnson needs 2 <= n <= 30");
  require(m >= 0 && m <= n, ErrorCode::invalid_argument, "johnson needs 0 <= m <= n");
  const std::uint64_t size = binomial(n, m);
  check_cap(size, options.max_states, "johnson slice");
  StateSpace states(size, {Family::johnson, n, m});

  std::vector<Generator> gens;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      Generator gen;
      gen.label = transposition_label(i, j);
      gen.image.resize(size);
      for (StateIndex x = 0; x < size; ++x) {
        auto bits = states.decode(x);
        std::swap(bits[i - 1], bits[j - 1]);
        gen.image[x] = states.encode(bits);
      }
      gens.push_back(std::move(gen));
    }
  }
  return SchreierGraph(std::move(states), GeneratorSet(std::move(gens)));
}

SchreierGraph build_transposition_cayley(int n, BuildOptions options) {
  require(n >= 2 && n <= 8, ErrorCode::invalid_argument, "sym needs 2 <= n <= 8");
  const std::uint64_t size = factorial(static_cast<unsigned>(n));
  check_cap(size, options.max_states, "symmetric group");
  StateSpace states(size, {Family::sym_cayley, n, 0});

  std::vector<std::vector<int>> perms(size);
  for (StateIndex x = 0; x < size; ++x) perms[x] = states.decode(x);

  std::vector<Generator> gens;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      Generator gen;
      gen.label = transposition_label(i, j);
      gen.image.resize(size);
      // σ ↦ σ∘(i j): swap positions i and j of the one-line notation.
      for (StateIndex x = 0; x < size; ++x) {
        auto p = perms[x];
        std::swap(p[i - 1], p[j - 1]);
        gen.image[x] = static_cast<StateIndex>(rank_permutation(p));
      }
      gens.push_back(std::move(gen));
    }
  }
  return SchreierGraph(std::move(states), GeneratorSet(std::move(gens)));
}

SchreierGraph build_custom(std::size_t size, std::vector<Permutation> generators,
                           std::vector<std::string> labels, CustomOptions options) {
  require(size >= 1, ErrorCode::invalid_argument, "custom graph needs size >= 1");
  check_cap(size, options.max_states, "custom graph");
  require(!generators.empty(), ErrorCode::validation, "custom graph needs generators");
  require(labels.empty() || labels.size() == generators.size(),
          ErrorCode::invalid_argument, "labels must match the generator count");

  std::vector<Generator> gens;
  std::map<Permutation, std::size_t> seen;
  for (std::size_t u = 0; u < generators.size(); ++u) {
    Generator gen;
    gen.image = std::move(generators[u]);
    gen.label = labels.empty() ? "g" + std::to_string(u) : labels[u];
    require(is_bijection(gen.image, size), ErrorCode::validation,
            "generator " + gen.label + " is not a permutation of [0," +
                std::to_string(size) + ")");
    require(!is_identity(gen.image), ErrorCode::validation,
            "generator " + gen.label + " is the identity");
    auto [it, inserted] = seen.emplace(gen.image, u);
    if (!inserted)
      throw_error(ErrorCode::validation, "generator " + gen.label + " duplicates generator " +
                                             gens[it->second].label);
    gens.push_back(std::move(gen));
  }

  GeneratorSet set(gens);
  if (!set.inverse_closed()) {
    require(options.auto_close_inverses, ErrorCode::validation,
            "generator set is not closed under inverses");
    const std::size_t original = gens.size();
    for (std::size_t u = 0; u < original; ++u) {
      if (set.inverse_of(u)) continue;
      Permutation inv = inverse(gens[u].image);
      if (seen.emplace(inv, gens.size()).second)
        gens.push_back({std::move(inv), "inv(" + gens[u].label + ")"});
    }
    set = GeneratorSet(std::move(gens));
  }

  SchreierGraph g(StateSpace(size, {Family::custom, 0, 0}), std::move(set));
  if (!options.allow_disconnected)
    require(is_connected(g), ErrorCode::validation,
            "generator action is not transitive (graph is disconnected)");
  return g;
}

// ---------------------------------------------------------------------------
// Validation

bool is_connected(const SchreierGraph& g) {
  const std::size_t n = g.size();
  std::vector<bool> seen(n, false);
  std::queue<StateIndex> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const StateIndex x = frontier.front();
    frontier.pop();
    for (std::size_t u = 0; u < g.degree(); ++u) {
      const StateIndex y = g.apply(x, u);
      if (!seen[y]) {
        seen[y] = true;
        ++reached;
        frontier.push(y);
      }
    }
  }
  return reached == n;
}

ValidationReport validate(const SchreierGraph& g) {
  ValidationReport report;
  report.degree = g.degree();

  report.inverse_closed = g.generators().inverse_closed();
  if (report.inverse_closed) {
    for (std::size_t u = 0; u < g.degree() && report.inverse_closed; ++u) {
      const std::size_t v = *g.generators().inverse_of(u);
      for (StateIndex x = 0; x < g.size(); ++x) {
        if (g.apply(g.apply(x, u), v) != x) {
          report.inverse_closed = false;
          break;
        }
      }
    }
  }
  if (!report.inverse_closed) report.failures.push_back("not closed under inverses");

  report.connected = is_connected(g);
  if (!report.connected) report.failures.push_back("disconnected");

  // Every state has exactly one out-edge per generator (self-loops included),
  // so the degree is |U| as long as every generator is a bijection; the
  // in-degree check catches anything else.
  std::vector<std::size_t> in_degree(g.size(), 0);
  for (std::size_t u = 0; u < g.degree(); ++u)
    for (StateIndex x = 0; x < g.size(); ++x) ++in_degree[g.apply(x, u)];
  report.regular = std::all_of(in_degree.begin(), in_degree.end(),
                               [&](std::size_t d) { return d == g.degree(); });
  if (!report.regular) report.failures.push_back("not regular");

  std::unordered_map<std::uint64_t, std::int64_t> balance;
  for (std::size_t u = 0; u < g.degree(); ++u) {
    for (StateIndex x = 0; x < g.size(); ++x) {
      const StateIndex y = g.apply(x, u);
      if (x == y) continue;
      const std::uint64_t lo = std::min(x, y), hi = std::max(x, y);
      balance[(lo << 32) | hi] += x < y ? 1 : -1;
    }
  }
  report.undirected = std::all_of(balance.begin(), balance.end(),
                                  [](const auto& kv) { return kv.second == 0; });
  if (!report.undirected) report.failures.push_back("edge multiset not symmetric");
  return report;
}

}  // namespace noiselab
