#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace noiselab {

using StateIndex = std::uint32_t;
using Permutation = std::vector<StateIndex>;

inline constexpr std::size_t kDefaultMaxStates = 20000;

enum class Family { torus, hypercube, johnson, sym_cayley, custom };

/// Which family a state set came from. For torus the parameters are (m, n),
/// for johnson (n, m), for hypercube and sym_cayley only `first` (= n) is used.
struct FamilyTag {
  Family family = Family::custom;
  int first = 0;
  int second = 0;

  std::string describe() const;
  bool operator==(const FamilyTag&) const = default;
};

/// Canonical bijection between indices [0, size) and state labels.
///
/// Orderings:
///  - torus / hypercube: mixed radix, coordinate 1 least significant;
///  - johnson: ascending lexicographic order of the binary word, coordinate 1
///    leftmost;
///  - sym_cayley: lexicographic order of the one-line notation.
class StateSpace {
 public:
  StateSpace(std::size_t size, FamilyTag tag);

  std::size_t size() const { return size_; }
  const FamilyTag& tag() const { return tag_; }

  /// Coordinates (torus), bits (hypercube, johnson) or the 1-based one-line
  /// notation (sym_cayley). Custom states decode to their own index.
  std::vector<int> decode(StateIndex index) const;
  StateIndex encode(std::span<const int> label) const;
  std::string label(StateIndex index) const;

  /// True when every state is a word in {0,1}^n (hypercube, torus with m = 2,
  /// johnson slices); named Boolean functions need this.
  bool has_binary_words() const;
  int word_length() const;

 private:
  std::size_t size_;
  FamilyTag tag_;
  // johnson only: words as integers with coordinate 1 as the most
  // significant bit, sorted ascending.
  std::vector<std::uint32_t> words_;
};

struct Generator {
  Permutation image;
  std::string label;
};

/// Ordered generator list with inverse pairing. A generator whose inverse is
/// missing has no pairing; `validate` reports that, `build_custom` rejects it.
class GeneratorSet {
 public:
  GeneratorSet() = default;
  explicit GeneratorSet(std::vector<Generator> generators);

  std::size_t size() const { return generators_.size(); }
  const Generator& operator[](std::size_t u) const { return generators_[u]; }
  const std::vector<Generator>& generators() const { return generators_; }
  std::optional<std::size_t> inverse_of(std::size_t u) const;
  bool inverse_closed() const;

 private:
  std::vector<Generator> generators_;
  std::vector<std::optional<std::size_t>> inverse_index_;
};

class SchreierGraph {
 public:
  SchreierGraph(StateSpace states, GeneratorSet gens);

  const StateSpace& states() const { return states_; }
  const GeneratorSet& generators() const { return gens_; }
  std::size_t size() const { return states_.size(); }
  std::size_t degree() const { return gens_.size(); }

  StateIndex apply(StateIndex state, std::size_t u) const {
    return gens_[u].image[state];
  }
  std::span<const StateIndex> image(std::size_t u) const {
    return gens_[u].image;
  }

 private:
  StateSpace states_;
  GeneratorSet gens_;
};

struct BuildOptions {
  std::size_t max_states = kDefaultMaxStates;
};

SchreierGraph build_torus(int m, int n, BuildOptions options = {});
/// torus(2, n) tagged as a hypercube.
SchreierGraph build_hypercube(int n, BuildOptions options = {});
SchreierGraph build_johnson(int n, int m, BuildOptions options = {});
SchreierGraph build_transposition_cayley(int n, BuildOptions options = {});

struct CustomOptions {
  bool auto_close_inverses = false;
  bool allow_disconnected = false;
  std::size_t max_states = kDefaultMaxStates;
};

SchreierGraph build_custom(std::size_t size,
                           std::vector<Permutation> generators,
                           std::vector<std::string> labels = {},
                           CustomOptions options = {});

StateIndex apply_generator(const SchreierGraph& g, StateIndex state,
                           std::size_t u);

struct ValidationReport {
  bool inverse_closed = false;
  bool connected = false;
  bool regular = false;
  bool undirected = false;
  std::size_t degree = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

ValidationReport validate(const SchreierGraph& g);

bool is_connected(const SchreierGraph& g);

}  // namespace noiselab
