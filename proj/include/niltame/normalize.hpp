#pragma once

#include "niltame/arith.hpp"
#include "niltame/terms.hpp"
#include "niltame/words.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace niltame {

/// A free-group word for every prime: `fallback` on all primes not listed in
/// `exceptions`. Cells equal to the fallback are never stored, so two
/// piecewise words are equal as functions iff they compare equal.
class PiecewiseWord {
 public:
  PiecewiseWord() = default;
  explicit PiecewiseWord(Word uniform) : fallback_(std::move(uniform)) {}
  PiecewiseWord(Word fallback, std::map<BigInt, Word> exceptions);

  const Word& fallback() const noexcept { return fallback_; }
  const std::map<BigInt, Word>& exceptions() const noexcept { return exceptions_; }
  const Word& at(const BigInt& p) const;

  /// Primes where this word differs from the fallback.
  PrimeSet exceptional_primes() const;

  friend bool operator==(const PiecewiseWord&, const PiecewiseWord&) = default;

 private:
  void canonicalize();

  Word fallback_;
  std::map<BigInt, Word> exceptions_;
};

/// Per-prime normal form of a sigma-term. Every Comp node must be admissibly
/// wrapped (SignatureViolation otherwise); n^(w-1) with n > 1 is accepted
/// only where its base is the identity (UnsupportedExponent otherwise).
PiecewiseWord normalize(const Term& term);

/// The cell of normalize(term) that contains p.
Word normal_form_at(const Term& term, const BigInt& p);

struct CellMismatch {
  BigInt prime;
  Word lhs;
  Word rhs;
};

struct Verdict {
  bool equal = true;
  /// Exceptional primes where the two sides differ, ascending.
  std::vector<CellMismatch> witnesses;
  /// Set when the fallback cells differ; the sides then differ at every
  /// prime outside both exception lists. `representative` is the least one.
  struct Fallback {
    Word lhs;
    Word rhs;
    BigInt representative;
  };
  std::optional<Fallback> all_other_primes;

  /// Every prime named by the verdict (witnesses plus representative).
  std::vector<BigInt> witness_primes() const;
};

/// Decides u = v over finite nilpotent groups.
Verdict decide_equal(const Term& u, const Term& v);

std::string format_piecewise(const PiecewiseWord& w, const Alphabet& alphabet);
std::string format_verdict(const Verdict& v, const Alphabet& alphabet);

}  // namespace niltame
