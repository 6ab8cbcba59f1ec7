#pragma once

#include "niltame/arith.hpp"
#include "niltame/terms.hpp"
#include "niltame/words.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

namespace niltame {

template <typename Scalar>
using IntMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using IntRowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Row i holds the exponent sums of each letter in word i.
using ExponentMatrix = IntMatrix<BigInt>;

ExponentMatrix exponent_matrix(const std::vector<Word>& words, std::size_t columns);
inline ExponentMatrix exponent_matrix(const std::vector<Word>& words, const Alphabet& alphabet) {
  return exponent_matrix(words, alphabet.size());
}

/// Exponent-sum row of a kappa-term, computed on the term itself: a product
/// adds rows, an integer power scales, w-1 negates.
IntRowVector<BigInt> exponent_row(const Term& kappa, std::size_t columns);

/// Exponent matrix of an operator's kappa words over its formal variables.
ExponentMatrix operator_matrix(const std::vector<Term>& kappa);

/// Exact determinant by fraction-free (Bareiss) elimination.
template <typename Derived>
typename Derived::Scalar bareiss_determinant(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() != input.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const Eigen::Index n = input.rows();
  if (n == 0) return Scalar(1);
  IntMatrix<Scalar> a = input;
  Scalar sign(1);
  Scalar previous(1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index pivot = k + 1;
      while (pivot < n && a(pivot, k) == 0) ++pivot;
      if (pivot == n) return Scalar(0);
      a.row(k).swap(a.row(pivot));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / previous;
      }
      a(i, k) = Scalar(0);
    }
    previous = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// Gcd of all maximal (cols x cols) minors of a matrix with rows >= cols;
/// 0 when they all vanish or rows < cols. Computed by unimodular row
/// echelon reduction, which preserves the row lattice and hence this gcd.
template <typename Derived>
typename Derived::Scalar maximal_minor_gcd(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index rows = input.rows();
  const Eigen::Index cols = input.cols();
  if (rows < cols) return Scalar(0);
  using std::abs;
  IntMatrix<Scalar> a = input;
  Scalar product(1);
  Eigen::Index top = 0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    // Euclid on column c among rows top..rows-1 until one nonzero remains.
    for (;;) {
      Eigen::Index pivot = -1;
      for (Eigen::Index r = top; r < rows; ++r) {
        if (a(r, c) != 0 && (pivot < 0 || abs(a(r, c)) < abs(a(pivot, c)))) pivot = r;
      }
      if (pivot < 0) return Scalar(0);
      a.row(top).swap(a.row(pivot));
      bool done = true;
      for (Eigen::Index r = top + 1; r < rows; ++r) {
        if (a(r, c) == 0) continue;
        Scalar q = a(r, c) / a(top, c);
        a.row(r) -= q * a.row(top);
        if (a(r, c) != 0) done = false;
      }
      if (done) break;
    }
    product *= abs(a(top, c));
    ++top;
  }
  return product;
}

/// Determinant of a square exponent matrix.
BigInt det(const ExponentMatrix& m);

/// d(M): gcd of the |A| x |A| minors. M has rank |A| modulo p iff p does
/// not divide d(M); d(M) = 0 means no prime gives full rank.
BigInt nondense_prime_bound(const ExponentMatrix& m);

}  // namespace niltame
