#pragma once

#include "niltame/arith.hpp"
#include "niltame/groups.hpp"
#include "niltame/stallings.hpp"
#include "niltame/terms.hpp"
#include "niltame/words.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace niltame {

/// R_0* u_0 R_1* ... u_{t-1} R_t*: generator lists (an empty list stands
/// for {1}*) interleaved with fixed connector words.
struct RationalConstraint {
  std::vector<std::vector<Word>> slots;
  std::vector<Word> connectors;

  std::size_t t() const noexcept { return connectors.size(); }
  /// Letters occurring in any slot generator or connector.
  std::vector<bool> permitted_letters(std::size_t alphabet_size) const;
};

/// Parses "{a}*", "{a,b}* ab {b}*", "ab" and the like.
RationalConstraint parse_constraint(std::string_view text, const Alphabet& alphabet);
std::string format_constraint(const RationalConstraint& c, const Alphabet& alphabet);

/// Variable name -> term over the alphabet.
using SolutionMap = std::map<char, Term>;

/// Variable name -> one term per constraint slot.
using FactorizedSolution = std::map<char, std::vector<Term>>;

struct Equation {
  Term lhs;
  Term rhs;
  std::string text;
};

/// Equations over the alphabet followed by the variables: letter index
/// |A| + i is variable i.
struct EquationSystem {
  Alphabet alphabet{"a"};
  std::string variables;
  std::vector<Equation> equations;
  std::map<char, RationalConstraint> constraints;
  /// Solutions given in the input, if any.
  SolutionMap solution;

  /// Alphabet letters followed by the variable names.
  Alphabet extended_alphabet() const;
};

/// Line-based format:
///   alphabet ab
///   vars x y z
///   x : {a}* ;
///   (x*a)^2 = a*x*x*a
///   x := a^(3^w)
/// Blank lines and lines starting with '#' are ignored. `alphabet`
/// overrides the file's alphabet line.
EquationSystem parse_system(std::string_view text, std::optional<Alphabet> alphabet = std::nullopt);

/// Letters used by a term, Comp kappa words excluded.
std::vector<bool> letters_used(const Term& term, std::size_t alphabet_size);

/// True iff the term uses only letters permitted by the constraint.
bool conforms(const Term& term, const RationalConstraint& c, std::size_t alphabet_size);

/// A term equal to `target` at the primes of the cofinite set `s1` and to 1
/// elsewhere, built from H's generators rewritten in K's basis. Requires
/// target in K and H inside K. Throws NoDenseSubset when no subset of H's
/// generators has a nonzero determinant whose primes all lie outside s1.
Term construct_uniform_witness(const StallingsGraph& h, const StallingsGraph& k, const PrimeSet& s1,
                               const Word& target, const Alphabet& alphabet);

/// A term equal to `target` at p_i and to 1 at every other prime.
Term construct_exceptional_witness(const StallingsGraph& h, const BigInt& p_i,
                                   const std::vector<BigInt>& other_bad_primes, const Word& target,
                                   const StallingsGraph& k_pi, const Alphabet& alphabet);

/// Product over the constraint slots of the default factor and every
/// exceptional factor, followed by the slot's connector word. The keys of
/// `exceptional` must be exactly the primes outside the cofinite set `s`.
SolutionMap combine_solutions(const EquationSystem& system, const FactorizedSolution& default_solution,
                              const std::map<BigInt, FactorizedSolution>& exceptional, const PrimeSet& s);

struct CheckRecord {
  std::size_t equation = 0;
  std::string group;
  std::size_t assignments = 0;
  bool pass = true;
  bool nilpotent = true;
  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct Counterexample {
  std::string group;
  std::size_t equation = 0;
  std::vector<std::string> assignment;  // element name per alphabet letter
  std::string lhs;
  std::string rhs;
  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct VerificationReport {
  bool pass = true;
  std::optional<Counterexample> counterexample;
  std::vector<CheckRecord> checks;
  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Evaluates every equation under `sol` for every assignment of the
/// alphabet letters in every corpus group. The first counterexample is the
/// least in (corpus order, equation, assignment) order.
VerificationReport verify_solution(const EquationSystem& system, const SolutionMap& sol,
                                   const std::vector<FiniteGroup>& corpus);

std::string format_verification(const EquationSystem& system, const VerificationReport& report);

struct DemoReport {
  EquationSystem system;
  VerificationReport odd;
  VerificationReport two;
  bool conforms = false;
  /// Odd corpus passes, 2-group corpus fails, x and z conform.
  bool as_expected() const { return odd.pass && !two.pass && conforms; }
};

std::vector<std::string> demo_odd_corpus();
std::vector<std::string> demo_two_corpus();
const char* demo_system_text();

DemoReport demo_nonreducible();
std::string format_demo(const DemoReport& report);

}  // namespace niltame
