#include "niltame/abelian.hpp"

#include "niltame/error.hpp"

namespace niltame {

ExponentMatrix exponent_matrix(const std::vector<Word>& words, std::size_t columns) {
  ExponentMatrix m = ExponentMatrix::Zero(static_cast<Eigen::Index>(words.size()),
                                          static_cast<Eigen::Index>(columns));
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (const auto& s : words[i].letters()) {
      if (s.index >= columns) throw std::invalid_argument("exponent_matrix: letter outside the alphabet");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s.index)) += s.sign;
    }
  }
  return m;
}

IntRowVector<BigInt> exponent_row(const Term& kappa, std::size_t columns) {
  const auto cols = static_cast<Eigen::Index>(columns);
  switch (kappa.kind()) {
    case Term::Kind::Identity:
      return IntRowVector<BigInt>::Zero(cols);
    case Term::Kind::Letter: {
      if (kappa.letter_index() >= columns) throw std::invalid_argument("exponent_row: letter outside the alphabet");
      IntRowVector<BigInt> row = IntRowVector<BigInt>::Zero(cols);
      row(static_cast<Eigen::Index>(kappa.letter_index())) = 1;
      return row;
    }
    case Term::Kind::Product:
      return exponent_row(kappa.left(), columns) + exponent_row(kappa.right(), columns);
    case Term::Kind::Power: {
      const Exponent& e = kappa.exponent();
      if (e.kind == Exponent::Kind::Integer) return exponent_row(kappa.base(), columns) * e.value;
      if (e.kind == Exponent::Kind::OmegaMinusOne) return -exponent_row(kappa.base(), columns);
      break;
    }
    case Term::Kind::Comp:
      break;
  }
  throw SignatureViolation("exponent_row: not a kappa-term");
}

ExponentMatrix operator_matrix(const std::vector<Term>& kappa) {
  const std::size_t n = kappa.size();
  ExponentMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) m.row(static_cast<Eigen::Index>(i)) = exponent_row(kappa[i], n);
  return m;
}

BigInt det(const ExponentMatrix& m) { return bareiss_determinant(m); }

BigInt nondense_prime_bound(const ExponentMatrix& m) { return maximal_minor_gcd(m); }

}  // namespace niltame
