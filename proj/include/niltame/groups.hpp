#pragma once

#include "niltame/arith.hpp"
#include "niltame/terms.hpp"
#include "niltame/words.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace niltame {

using Element = std::uint32_t;

/// Values of the alphabet letters, indexed by letter.
using Assignment = std::vector<Element>;

inline constexpr std::size_t kMaxGroupOrder = 10'000;

/// A finite group given by its Cayley table.
class FiniteGroup {
 public:
  /// Tabulates `multiply` over elements 0..names.size()-1. Finds the
  /// identity, inverses and element orders, and spot-checks associativity.
  FiniteGroup(std::string label, std::vector<std::string> names,
              const std::function<Element(Element, Element)>& multiply);

  std::size_t order() const noexcept { return names_.size(); }
  const std::string& label() const noexcept { return label_; }
  Element identity() const noexcept { return identity_; }

  Element multiply(Element a, Element b) const { return table_[static_cast<std::size_t>(a) * order() + b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  std::uint64_t element_order(Element a) const { return orders_[a]; }
  Element power(Element a, const BigInt& z) const;
  Element power(Element a, std::uint64_t z) const;

  const std::string& element_name(Element a) const { return names_.at(a); }
  std::optional<Element> element_named(std::string_view name) const;

  bool is_abelian() const;

 private:
  std::string label_;
  std::vector<std::string> names_;
  std::vector<std::uint16_t> table_;
  std::vector<Element> inverse_;
  std::vector<std::uint64_t> orders_;
  Element identity_ = 0;
};

FiniteGroup cyclic_group(std::uint64_t n);
FiniteGroup direct_product(const std::vector<FiniteGroup>& factors);
/// Unitriangular 3x3 matrices over the integers mod p.
FiniteGroup heisenberg_group(std::uint64_t p);
/// Dihedral group of order n (n even).
FiniteGroup dihedral_group(std::uint64_t n);
FiniteGroup quaternion_group();
FiniteGroup symmetric_group(std::uint64_t n);

/// Builds a group from specs like "cyclic:6", "heisenberg:3", "dihedral:8",
/// "quaternion8", "sym:3" or "product:cyclic:2,cyclic:3". Throws
/// CapExceeded beyond kMaxGroupOrder.
FiniteGroup make_group(std::string_view spec);

/// True iff for every prime p the p-elements are closed under products.
bool is_nilpotent(const FiniteGroup& g);

/// p-groups of order <= max_order: cyclic, products of two cyclic, the
/// Heisenberg group and for p = 2 the dihedral and quaternion groups.
/// Sorted by (order, label).
std::vector<FiniteGroup> p_group_corpus(std::uint64_t p, std::uint64_t max_order);

/// A transformation of G^n, tabulated on tuple codes sum s_i |G|^i.
class OperatorTable {
 public:
  inline static constexpr std::uint64_t kMaxEntries = 1'000'000;

  OperatorTable(std::size_t arity, std::size_t group_order, std::vector<std::uint32_t> images);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t group_order() const noexcept { return group_order_; }
  std::size_t size() const noexcept { return images_.size(); }

  std::uint32_t encode(std::span<const Element> tuple) const;
  std::vector<Element> decode(std::uint32_t code) const;
  std::vector<Element> apply(std::span<const Element> tuple) const;
  std::uint32_t image(std::uint32_t code) const { return images_[code]; }

  /// (this o inner)(s) = this(inner(s)).
  OperatorTable compose(const OperatorTable& inner) const;
  bool is_idempotent() const;

  friend bool operator==(const OperatorTable&, const OperatorTable&) = default;

 private:
  std::size_t arity_;
  std::size_t group_order_;
  std::vector<std::uint32_t> images_;
};

/// Idempotent power f^r of a transformation: r at least the longest tail
/// and divisible by every cycle length.
OperatorTable omega_power(const OperatorTable& f);

/// Evaluates sigma-terms in one finite group, caching operator w-powers.
class Evaluator {
 public:
  explicit Evaluator(const FiniteGroup& group) : group_(group) {}

  const FiniteGroup& group() const noexcept { return group_; }

  Element eval(const Term& term, std::span<const Element> assignment);
  Element eval(const Word& word, std::span<const Element> assignment) const;

  /// The transformation s -> (kappa_1(s), ..., kappa_n(s)) of G^n.
  OperatorTable operator_table(const std::vector<Term>& kappa);
  /// Its idempotent power (cached).
  const OperatorTable& operator_omega(const std::vector<Term>& kappa);

 private:
  const FiniteGroup& group_;
  std::map<std::string, OperatorTable> omega_cache_;
};

Element eval_term(const FiniteGroup& g, std::span<const Element> assignment, const Term& term);
OperatorTable operator_omega(const FiniteGroup& g, const std::vector<Term>& kappa);

/// Calls `visit` on every assignment of `letters` letters in lexicographic
/// order (letter 0 most significant) until it returns false.
void for_each_assignment(const FiniteGroup& g, std::size_t letters,
                         const std::function<bool(const Assignment&)>& visit);

struct SeparatingWitness {
  FiniteGroup group;
  Assignment assignment;
  Element lhs;
  Element rhs;
};

/// Searches p-groups of order <= max_order (prime `hint` first, then the
/// other primes ascending) for an assignment where u and v differ.
std::optional<SeparatingWitness> find_separating_witness(const Term& u, const Term& v, std::optional<BigInt> hint,
                                                         std::uint64_t max_order, std::size_t letters);

std::string format_assignment(const FiniteGroup& g, const Assignment& assignment, const Alphabet& alphabet);

}  // namespace niltame
