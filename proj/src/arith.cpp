#include "niltame/arith.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace niltame {

namespace {

constexpr std::uint32_t kTrialLimit = 1'000'000;

BigInt abs_value(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

BigInt mod_inverse(BigInt a, const BigInt& m) {
  // Extended Euclid; caller guarantees gcd(a, m) = 1.
  BigInt old_r = a % m, r = m, old_s = 1, s = 0;
  if (old_r < 0) old_r += m;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  BigInt inv = old_s % m;
  if (inv < 0) inv += m;
  return inv;
}

BigInt pollard_rho(const BigInt& n, std::mt19937_64& rng) {
  if (n % 2 == 0) return 2;
  std::uniform_int_distribution<std::uint64_t> dist(1, std::numeric_limits<std::uint64_t>::max());
  for (;;) {
    BigInt c = BigInt(dist(rng)) % (n - 1) + 1;
    BigInt y = BigInt(dist(rng)) % n;
    BigInt g = 1, q = 1, x, ys;
    std::size_t r = 1;
    const std::size_t m = 128;
    auto f = [&](const BigInt& v) { return (v * v + c) % n; };
    do {
      x = y;
      for (std::size_t i = 0; i < r; ++i) y = f(y);
      std::size_t k = 0;
      do {
        ys = y;
        for (std::size_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = (q * abs_value(x - y)) % n;
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs_value(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_large(const BigInt& n, std::vector<BigInt>& out, std::mt19937_64& rng) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  BigInt d = pollard_rho(n, rng);
  split_large(d, out, rng);
  split_large(n / d, out, rng);
}

std::vector<BigInt> sorted_unique(std::vector<BigInt> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<BigInt> set_union(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<BigInt> set_intersection(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<BigInt> set_difference(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

BigInt gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  static const std::uint32_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : small) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  std::mt19937_64 rng(0x5eed);
  return boost::multiprecision::miller_rabin_test(n, 32, rng);
}

BigInt next_prime(const BigInt& n) {
  BigInt c = n < 2 ? BigInt(2) : BigInt(n + 1);
  while (!is_prime(c)) ++c;
  return c;
}

std::vector<BigInt> factorize(const BigInt& n) {
  if (n <= 0) throw std::invalid_argument("factorize: argument must be >= 1");
  std::vector<BigInt> out;
  BigInt rest = n;
  for (std::uint32_t p = 2; p <= kTrialLimit && BigInt(p) * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      out.emplace_back(p);
      rest /= p;
    }
  }
  if (rest > 1) {
    if (rest < BigInt(kTrialLimit) * kTrialLimit || is_prime(rest)) {
      out.push_back(rest);
    } else {
      std::mt19937_64 rng(0xfac7);
      split_large(rest, out, rng);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BigInt> prime_divisors(const BigInt& n) {
  if (n == 0) return {};
  return sorted_unique(factorize(abs_value(n)));
}

bool divides_only(const BigInt& det, const BigInt& m) {
  if (det == 0) throw std::invalid_argument("divides_only: determinant is zero");
  if (m < 1) throw std::invalid_argument("divides_only: m must be >= 1");
  BigInt d = abs_value(det);
  for (BigInt g = gcd(d, m); g > 1; g = gcd(d, m)) d /= g;
  return d == 1;
}

std::uint64_t stable_exponent(const BigInt& n, std::uint64_t d, StableVariant variant) {
  if (n < 1) throw std::invalid_argument("stable_exponent: n must be >= 1");
  if (d == 0) throw std::invalid_argument("stable_exponent: d must be >= 1");
  BigInt d1 = d;
  for (BigInt g = gcd(d1, n); g > 1; g = gcd(d1, n)) d1 /= g;
  const BigInt d2 = BigInt(d) / d1;
  if (d1 == 1) return 0;
  BigInt target = variant == StableVariant::Omega ? BigInt(1) : mod_inverse(n % d1, d1);
  // e = d2 * (target * d2^{-1} mod d1) satisfies both congruences.
  BigInt e = d2 * ((target * mod_inverse(d2 % d1, d1)) % d1);
  return e.convert_to<std::uint64_t>();
}

PrimeSet::PrimeSet(Mode mode, std::vector<BigInt> exceptions)
    : mode_(mode), exceptions_(sorted_unique(std::move(exceptions))) {
  for (const auto& p : exceptions_) {
    if (!is_prime(p)) throw std::invalid_argument("PrimeSet: " + p.str() + " is not prime");
  }
}

PrimeSet PrimeSet::all() { return PrimeSet(Mode::Cofinite, {}); }
PrimeSet PrimeSet::none() { return PrimeSet(Mode::Finite, {}); }
PrimeSet PrimeSet::finite(std::vector<BigInt> members) {
  return PrimeSet(Mode::Finite, std::move(members));
}
PrimeSet PrimeSet::all_except(std::vector<BigInt> excluded) {
  return PrimeSet(Mode::Cofinite, std::move(excluded));
}

bool PrimeSet::contains(const BigInt& p) const {
  bool listed = std::binary_search(exceptions_.begin(), exceptions_.end(), p);
  return is_cofinite() ? !listed : listed;
}

PrimeSet PrimeSet::complement() const {
  PrimeSet out;
  out.mode_ = is_cofinite() ? Mode::Finite : Mode::Cofinite;
  out.exceptions_ = exceptions_;
  return out;
}

PrimeSet PrimeSet::intersect(const PrimeSet& other) const {
  PrimeSet out;
  if (is_cofinite() && other.is_cofinite()) {
    out.mode_ = Mode::Cofinite;
    out.exceptions_ = set_union(exceptions_, other.exceptions_);
  } else if (!is_cofinite() && !other.is_cofinite()) {
    out.exceptions_ = set_intersection(exceptions_, other.exceptions_);
  } else {
    const PrimeSet& fin = is_cofinite() ? other : *this;
    const PrimeSet& cof = is_cofinite() ? *this : other;
    out.exceptions_ = set_difference(fin.exceptions_, cof.exceptions_);
  }
  return out;
}

PrimeSet PrimeSet::unite(const PrimeSet& other) const {
  return complement().intersect(other.complement()).complement();
}

std::string PrimeSet::to_string() const {
  std::ostringstream os;
  auto list = [&] {
    os << '{';
    for (std::size_t i = 0; i < exceptions_.size(); ++i) os << (i ? "," : "") << exceptions_[i];
    os << '}';
  };
  if (is_cofinite()) {
    if (exceptions_.empty()) return "all primes";
    os << "all primes except ";
  }
  list();
  return os.str();
}

PrimeSet primeset_combine(const PrimeSet& a, const PrimeSet& b, PrimeSetOp op) {
  switch (op) {
    case PrimeSetOp::Intersect: return a.intersect(b);
    case PrimeSetOp::Union: return a.unite(b);
    case PrimeSetOp::ComplementOfFirst: return a.complement();
  }
  throw std::logic_error("primeset_combine: bad op");
}

std::ostream& operator<<(std::ostream& os, const PrimeSet& s) { return os << s.to_string(); }

}  // namespace niltame
