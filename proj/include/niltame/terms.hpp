#pragma once

#include "niltame/arith.hpp"
#include "niltame/words.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace niltame {

/// Exponent of a Power node.
struct Exponent {
  enum class Kind {
    Integer,             // z
    OmegaMinusOne,       // w-1
    PowerOmega,          // n^w
    PowerOmegaMinusOne,  // n^(w-1)
  };

  Kind kind = Kind::Integer;
  BigInt value;  // z for Integer, n for the two n^... kinds, unused otherwise

  static Exponent integer(BigInt z) { return {Kind::Integer, std::move(z)}; }
  static Exponent omega_minus_one() { return {Kind::OmegaMinusOne, 0}; }
  static Exponent power_omega(BigInt n);
  static Exponent power_omega_minus_one(BigInt n);

  friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Immutable AST of a sigma-term. Copies share structure.
///
/// Inside a Comp node the kappa words are terms over the operator's formal
/// variables: letter index i there means x_{i+1}.
class Term {
 public:
  enum class Kind { Letter, Identity, Product, Power, Comp };

  /// The identity.
  Term();

  static Term letter(std::size_t index);
  static Term identity() { return Term(); }
  static Term product(Term left, Term right);
  static Term power(Term base, Exponent exponent);
  /// j-th component (0-based) of the w-power of the operator `kappa`,
  /// applied to `args`. Requires |kappa| = |args| and j < |kappa|.
  static Term comp(std::size_t component, std::vector<Term> kappa, std::vector<Term> args);

  /// Left-associated product of `factors`; identity when empty.
  static Term product_of(const std::vector<Term>& factors);

  Kind kind() const noexcept;
  std::size_t letter_index() const;
  const Term& left() const;
  const Term& right() const;
  const Term& base() const;
  const Exponent& exponent() const;
  std::size_t component() const;
  std::size_t arity() const;
  const std::vector<Term>& kappa() const;
  const std::vector<Term>& args() const;

  bool is_identity() const noexcept { return kind() == Kind::Identity; }

  /// True iff the term only uses letters, identity, products and powers with
  /// integer or w-1 exponents.
  bool is_kappa() const;

  /// Largest letter index used plus one (0 if none). Kappa words of Comp
  /// nodes are not counted: they live over formal variables.
  std::size_t letter_bound() const;

  /// Depth of the tree, counting Comp kappa words and arguments.
  std::size_t depth() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Term parse_term(std::string_view text, const Alphabet& alphabet);
std::string print_term(const Term& term, const Alphabet& alphabet);

/// Converts a reduced word into a product-of-letter-powers term.
Term word_to_term(const Word& w);

/// Evaluates a kappa-term in the free group, reading x^(w-1) as x^-1.
/// Throws SignatureViolation for non-kappa input.
Word kappa_to_word(const Term& kappa);

/// Substitutes `images[i]` for letter i. Kappa words of Comp nodes are left
/// untouched; Comp arguments are substituted.
Term substitute(const Term& term, const std::vector<Term>& images);

struct CompRecord {
  std::string path;  // e.g. "root", "root.base.args[1]"
  std::optional<BigInt> determinant;
  std::optional<BigInt> wrapper;  // m of the enclosing m^w power, if any
  bool valid = false;
  std::string reason;  // empty when valid
};

struct SignatureReport {
  bool valid = true;
  std::vector<CompRecord> comps;
};

/// Checks that every Comp node sits (through any number of w-1 powers)
/// directly under a Power with exponent m^w, where det M(kappa) != 0 and
/// every prime dividing det divides m.
SignatureReport validate_sigma(const Term& term);

}  // namespace niltame
