#include "niltame/normalize.hpp"

#include "niltame/error.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace niltame {

PiecewiseWord::PiecewiseWord(Word fallback, std::map<BigInt, Word> exceptions)
    : fallback_(std::move(fallback)), exceptions_(std::move(exceptions)) {
  for (const auto& [p, w] : exceptions_) {
    if (!is_prime(p)) throw std::invalid_argument("PiecewiseWord: exception key " + p.str() + " is not prime");
  }
  canonicalize();
}

const Word& PiecewiseWord::at(const BigInt& p) const {
  auto it = exceptions_.find(p);
  return it == exceptions_.end() ? fallback_ : it->second;
}

PrimeSet PiecewiseWord::exceptional_primes() const {
  std::vector<BigInt> keys;
  for (const auto& [p, w] : exceptions_) keys.push_back(p);
  return PrimeSet::finite(std::move(keys));
}

void PiecewiseWord::canonicalize() { std::erase_if(exceptions_, [&](const auto& kv) { return kv.second == fallback_; }); }

namespace {

using Cellwise = std::function<Word(const Word&)>;

PiecewiseWord map_cells(const PiecewiseWord& a, const Cellwise& f) {
  std::map<BigInt, Word> cells;
  for (const auto& [p, w] : a.exceptions()) cells.emplace(p, f(w));
  return PiecewiseWord(f(a.fallback()), std::move(cells));
}

PiecewiseWord multiply(const PiecewiseWord& a, const PiecewiseWord& b) {
  std::map<BigInt, Word> cells;
  for (const auto& [p, w] : a.exceptions()) cells.emplace(p, w * b.at(p));
  for (const auto& [p, w] : b.exceptions()) {
    if (!cells.contains(p)) cells.emplace(p, a.at(p) * w);
  }
  return PiecewiseWord(a.fallback() * b.fallback(), std::move(cells));
}

/// Cells at primes dividing n become the identity.
PiecewiseWord kill_divisors(const PiecewiseWord& a, const BigInt& n) {
  std::map<BigInt, Word> cells = a.exceptions();
  for (const auto& p : prime_divisors(n)) cells[p] = Word();
  return PiecewiseWord(a.fallback(), std::move(cells));
}

PiecewiseWord norm(const Term& t);

PiecewiseWord norm_power(const Term& t) {
  const Exponent& e = t.exponent();
  switch (e.kind) {
    case Exponent::Kind::Integer:
      return map_cells(norm(t.base()), [&](const Word& w) { return w.pow(e.value); });
    case Exponent::Kind::OmegaMinusOne:
      return map_cells(norm(t.base()), [](const Word& w) { return w.inverse(); });
    case Exponent::Kind::PowerOmega: {
      // Peel w-1 layers looking for a wrapped operator component.
      const Term* core = &t.base();
      bool invert = false;
      while (core->kind() == Term::Kind::Power && core->exponent().kind == Exponent::Kind::OmegaMinusOne) {
        core = &core->base();
        invert = !invert;
      }
      PiecewiseWord inner;
      if (core->kind() == Term::Kind::Comp) {
        // Wherever p does not divide m, p does not divide det either, so the
        // kappa words generate a p-dense subgroup and the w-power of the
        // operator fixes every coordinate.
        inner = norm(core->args()[core->component()]);
        if (invert) inner = map_cells(inner, [](const Word& w) { return w.inverse(); });
      } else {
        inner = norm(t.base());
      }
      return kill_divisors(inner, e.value);
    }
    case Exponent::Kind::PowerOmegaMinusOne: {
      PiecewiseWord inner = kill_divisors(norm(t.base()), e.value);
      if (e.value == 1) return inner;
      const auto check = [&](const Word& w) {
        if (!w.empty()) {
          throw UnsupportedExponent("x^(" + e.value.str() +
                                    "^(w-1)) has no free-group value at primes not dividing " + e.value.str() +
                                    " unless x is trivial there");
        }
      };
      const auto divisors = prime_divisors(e.value);
      check(inner.fallback());
      for (const auto& [p, w] : inner.exceptions()) {
        if (!std::binary_search(divisors.begin(), divisors.end(), p)) check(w);
      }
      return inner;
    }
  }
  throw std::logic_error("norm_power: bad exponent kind");
}

PiecewiseWord norm(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Letter: return PiecewiseWord(Word::letter(t.letter_index()));
    case Term::Kind::Identity: return PiecewiseWord();
    case Term::Kind::Product: return multiply(norm(t.left()), norm(t.right()));
    case Term::Kind::Power: return norm_power(t);
    case Term::Kind::Comp: break;
  }
  throw SignatureViolation("operator component is not wrapped in an m^w power");
}

}  // namespace

PiecewiseWord normalize(const Term& term) {
  const SignatureReport report = validate_sigma(term);
  if (!report.valid) {
    for (const auto& rec : report.comps) {
      if (!rec.valid) throw SignatureViolation("Comp at " + rec.path + ": " + rec.reason);
    }
  }
  return norm(term);
}

Word normal_form_at(const Term& term, const BigInt& p) {
  if (!is_prime(p)) throw std::invalid_argument("normal_form_at: " + p.str() + " is not prime");
  return normalize(term).at(p);
}

std::vector<BigInt> Verdict::witness_primes() const {
  std::vector<BigInt> out;
  for (const auto& w : witnesses) out.push_back(w.prime);
  if (all_other_primes) out.push_back(all_other_primes->representative);
  return out;
}

Verdict decide_equal(const Term& u, const Term& v) {
  const PiecewiseWord a = normalize(u);
  const PiecewiseWord b = normalize(v);
  std::set<BigInt> keys;
  for (const auto& [p, w] : a.exceptions()) keys.insert(p);
  for (const auto& [p, w] : b.exceptions()) keys.insert(p);
  Verdict out;
  for (const auto& p : keys) {
    if (a.at(p) != b.at(p)) out.witnesses.push_back({p, a.at(p), b.at(p)});
  }
  if (a.fallback() != b.fallback()) {
    BigInt rep = 2;
    while (keys.contains(rep)) rep = next_prime(rep);
    out.all_other_primes = Verdict::Fallback{a.fallback(), b.fallback(), rep};
  }
  out.equal = out.witnesses.empty() && !out.all_other_primes;
  return out;
}

std::string format_piecewise(const PiecewiseWord& w, const Alphabet& alphabet) {
  std::ostringstream os;
  for (const auto& [p, cell] : w.exceptions()) os << "p=" << p << ": " << cell.to_string(alphabet) << '\n';
  os << "default: " << w.fallback().to_string(alphabet) << '\n';
  return os.str();
}

std::string format_verdict(const Verdict& v, const Alphabet& alphabet) {
  if (v.equal) return "EQUAL\n";
  std::ostringstream os;
  for (const auto& m : v.witnesses) {
    os << "UNEQUAL at p=" << m.prime << ": " << m.lhs.to_string(alphabet) << " ≠ " << m.rhs.to_string(alphabet)
       << '\n';
  }
  if (v.all_other_primes) {
    os << "UNEQUAL at all other primes (e.g. p=" << v.all_other_primes->representative
       << "): " << v.all_other_primes->lhs.to_string(alphabet) << " ≠ "
       << v.all_other_primes->rhs.to_string(alphabet) << '\n';
  }
  return os.str();
}

}  // namespace niltame
