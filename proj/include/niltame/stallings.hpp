#pragma once

#include "niltame/arith.hpp"
#include "niltame/words.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace niltame {

struct StallingsEdge {
  std::uint32_t source = 0;
  std::size_t letter = 0;
  std::uint32_t target = 0;
  friend auto operator<=>(const StallingsEdge&, const StallingsEdge&) = default;
};

/// Folded, trimmed inverse automaton of a finitely generated subgroup of the
/// free group on `alphabet_size` letters. Vertex 0 is the base. Vertices
/// are numbered in breadth-first order from the base (letters ascending,
/// outgoing edge before incoming), so equal subgroups give identical graphs.
class StallingsGraph {
 public:
  /// Graph of the trivial subgroup.
  explicit StallingsGraph(std::size_t alphabet_size = 0);

  static StallingsGraph build(const std::vector<Word>& generators, std::size_t alphabet_size);

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t vertex_count() const noexcept { return vertices_; }
  const std::vector<StallingsEdge>& edges() const noexcept { return edges_; }
  const std::vector<Word>& generators() const noexcept { return generators_; }
  std::size_t rank() const noexcept { return edges_.size() + 1 - vertices_; }

  /// Endpoint of the edge leaving `v` labelled by `s`, if any.
  std::optional<std::uint32_t> step(std::uint32_t v, SignedLetter s) const;

  /// Equality of the subgroups; the generator lists are ignored.
  friend bool operator==(const StallingsGraph& a, const StallingsGraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  friend StallingsGraph fold_graph(std::size_t, std::size_t, std::vector<StallingsEdge>, std::vector<Word>);

  std::size_t alphabet_size_ = 0;
  std::size_t vertices_ = 1;
  std::vector<StallingsEdge> edges_;
  std::vector<Word> generators_;
  std::vector<std::uint32_t> out_;  // vertex * alphabet + letter -> target or kNone
  std::vector<std::uint32_t> in_;
};

bool member(const StallingsGraph& h, const Word& w);

/// Free basis read off a breadth-first spanning tree: one word per non-tree
/// edge, in edge order.
std::vector<Word> basis(const StallingsGraph& h);

/// Expresses w in basis(k): letter i of the result stands for basis word i.
/// Throws NotMember.
Word rewrite_in_basis(const StallingsGraph& k, const Word& w);

/// Substitutes basis words back into a rewritten word.
Word expand_from_basis(const std::vector<Word>& basis_words, const Word& rewritten);

/// True iff every element of `a` lies in `b`.
bool is_subgroup_of(const StallingsGraph& a, const StallingsGraph& b);

inline constexpr std::size_t kMaxOvergroupVertices = 12;

/// All overgroups whose automata are folded quotients of h's, h first, the
/// rest by decreasing vertex count then edge list. Throws CapExceeded above
/// kMaxOvergroupVertices vertices.
std::vector<StallingsGraph> overgroups(const StallingsGraph& h);

struct DensityData {
  /// Gcd of the maximal minors of the basis exponent matrix.
  BigInt bound;
  /// Primes p for which h is dense in the pro-p topology.
  PrimeSet primes;
};

DensityData dense_primes(const StallingsGraph& h);

struct ClosureReport {
  enum class Method { ExactDensity, Oracle };
  StallingsGraph candidate;
  PrimeSet primes;
  Method method = Method::Oracle;
  unsigned budget = 0;
  /// Primes at which p_closure was actually run.
  std::vector<BigInt> sampled;
};

std::string to_string(ClosureReport::Method m);

inline constexpr unsigned kDefaultClosureBudget = 3;

/// Largest overgroup of h that no homomorphism into a test p-group of order
/// at most p^budget separates from h (cyclic p-groups, their squares and
/// the Heisenberg group mod p). A semi-decision: a larger budget can only
/// shrink the answer. `primes` is {p}.
ClosureReport p_closure(const StallingsGraph& h, const BigInt& p, unsigned budget = kDefaultClosureBudget);

/// Candidate for the constant closure on a cofinite set of primes: the bad
/// primes divide the density bound of some overgroup; p_closure is run at
/// the first three primes outside them. Sampled primes that disagree with
/// the majority answer are removed from the reported set.
ClosureReport stable_closure_report(const StallingsGraph& h, unsigned budget = 2);

/// "v0 -a-> v1" per edge, one per line.
std::string format_graph(const StallingsGraph& h, const Alphabet& alphabet);

}  // namespace niltame
