#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace niltame {

/// Exact signed integer. Expression templates are off so the type behaves
/// like a plain value inside Eigen matrices and standard containers.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

BigInt gcd(const BigInt& a, const BigInt& b);

bool is_prime(const BigInt& n);

/// Smallest prime strictly greater than `n`.
BigInt next_prime(const BigInt& n);

/// Prime factors of `n` with multiplicity, ascending. Throws on n <= 0.
std::vector<BigInt> factorize(const BigInt& n);

/// Distinct prime divisors of |n|, ascending. Empty for n = 0 or |n| = 1.
std::vector<BigInt> prime_divisors(const BigInt& n);

/// True iff every prime dividing |det| divides m. Uses gcd stripping, so `det`
/// is never factored. Throws on det = 0 or m < 1.
bool divides_only(const BigInt& det, const BigInt& m);

enum class StableVariant { Omega, OmegaMinusOne };

/// Eventual value of n^{k!} (or n^{k!-1}) modulo d as k grows.
///
/// Split d = d1 * d2 with d1 the largest divisor coprime to n. The result is
/// the unique e in [0, d) with e = 1 (resp. n^{-1}) mod d1 and e = 0 mod d2.
/// Applied as an exponent to an element of order d this realises x^{n^w}
/// and x^{n^(w-1)}.
std::uint64_t stable_exponent(const BigInt& n, std::uint64_t d, StableVariant variant);

/// A finite or cofinite set of primes.
class PrimeSet {
 public:
  enum class Mode { Finite, Cofinite };

  /// The empty set.
  PrimeSet() = default;

  static PrimeSet all();
  static PrimeSet none();
  static PrimeSet finite(std::vector<BigInt> members);
  static PrimeSet all_except(std::vector<BigInt> excluded);

  Mode mode() const noexcept { return mode_; }
  bool is_cofinite() const noexcept { return mode_ == Mode::Cofinite; }
  /// Members when finite, non-members when cofinite. Sorted, distinct.
  const std::vector<BigInt>& exceptions() const noexcept { return exceptions_; }

  bool contains(const BigInt& p) const;

  PrimeSet complement() const;
  PrimeSet intersect(const PrimeSet& other) const;
  PrimeSet unite(const PrimeSet& other) const;

  std::string to_string() const;

  friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

 private:
  PrimeSet(Mode mode, std::vector<BigInt> exceptions);

  Mode mode_ = Mode::Finite;
  std::vector<BigInt> exceptions_;
};

enum class PrimeSetOp { Intersect, Union, ComplementOfFirst };

PrimeSet primeset_combine(const PrimeSet& a, const PrimeSet& b, PrimeSetOp op);

std::ostream& operator<<(std::ostream& os, const PrimeSet& s);

}  // namespace niltame
