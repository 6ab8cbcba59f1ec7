#include "oracles.hpp"

#include "niltame/arith.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace niltame;

TEST_CASE("factorize", "[arith]") {
  CHECK(factorize(12) == std::vector<BigInt>{2, 2, 3});
  CHECK(factorize(1).empty());
  CHECK(factorize(97) == std::vector<BigInt>{97});
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
  CHECK_THROWS_AS(factorize(-4), std::invalid_argument);

  // Product of two primes above the trial-division bound.
  const BigInt p("1000000007"), q("998244353");
  CHECK(factorize(p * q) == std::vector<BigInt>{q, p});
  const BigInt big("18446744073709551617");  // 2^64 + 1
  CHECK(factorize(big) == std::vector<BigInt>{274177, BigInt("67280421310721")});
  const BigInt three = BigInt(1000003) * 1000033 * 1000037;
  CHECK(factorize(three) == std::vector<BigInt>{1000003, 1000033, 1000037});
}

TEST_CASE("factorize multiplies back", "[arith]") {
  for (long long n = 1; n <= 2000; ++n) {
    BigInt product = 1;
    BigInt last = 0;
    for (const auto& f : factorize(n)) {
      REQUIRE(is_prime(f));
      REQUIRE(f >= last);
      last = f;
      product *= f;
    }
    REQUIRE(product == n);
  }
}

TEST_CASE("prime divisors and primality", "[arith]") {
  CHECK(prime_divisors(0).empty());
  CHECK(prime_divisors(-1).empty());
  CHECK(prime_divisors(-12) == std::vector<BigInt>{2, 3});
  CHECK(next_prime(2) == 3);
  CHECK(next_prime(13) == 17);
  CHECK(next_prime(-5) == 2);
  int count = 0;
  for (int n = 0; n < 1000; ++n) count += is_prime(n);
  CHECK(count == 168);
}

TEST_CASE("divides_only", "[arith]") {
  CHECK(divides_only(2, 2));
  CHECK_FALSE(divides_only(6, 2));
  CHECK(divides_only(8, 6));
  CHECK(divides_only(-8, 6));
  CHECK(divides_only(1, 1));
  CHECK_THROWS(divides_only(0, 2));
  CHECK_THROWS(divides_only(2, 0));
  for (long long d = 1; d <= 60; ++d) {
    for (long long m = 1; m <= 60; ++m) {
      bool expected = true;
      for (const auto& p : prime_divisors(d)) expected &= (m % p.convert_to<long long>() == 0);
      REQUIRE(divides_only(d, m) == expected);
    }
  }
}

TEST_CASE("stable_exponent examples", "[arith]") {
  CHECK(stable_exponent(2, 3, StableVariant::Omega) == 1);
  CHECK(stable_exponent(2, 4, StableVariant::Omega) == 0);
  CHECK(stable_exponent(10, 12, StableVariant::Omega) == 4);
  CHECK(stable_exponent(2, 3, StableVariant::OmegaMinusOne) == 2);
  CHECK(stable_exponent(5, 1, StableVariant::Omega) == 0);
}

TEST_CASE("stable_exponent is idempotent for the w variant", "[arith]") {
  for (std::uint64_t n = 1; n <= 60; ++n) {
    for (std::uint64_t d = 1; d <= 60; ++d) {
      const std::uint64_t e = stable_exponent(n, d, StableVariant::Omega);
      REQUIRE(e < d);
      REQUIRE(e * e % d == e);
      // w-1 variant times n gives the w variant.
      const std::uint64_t f = stable_exponent(n, d, StableVariant::OmegaMinusOne);
      REQUIRE(f * n % d == e);
    }
  }
}

TEST_CASE("stable_exponent matches brute-force stabilization", "[arith]") {
  for (std::uint64_t n = 1; n <= 60; ++n) {
    for (std::uint64_t d = 1; d <= 60; ++d) {
      for (bool minus : {false, true}) {
        const auto limit = oracle::factorial_power_limit(n, d, minus, 60);
        REQUIRE(limit.has_value());
        REQUIRE(stable_exponent(n, d, minus ? StableVariant::OmegaMinusOne : StableVariant::Omega) == *limit);
      }
    }
  }
}

TEST_CASE("PrimeSet basics", "[arith]") {
  const auto c2 = PrimeSet::all_except({2});
  const auto c3 = PrimeSet::all_except({3});
  CHECK(primeset_combine(c2, c3, PrimeSetOp::Intersect) == PrimeSet::all_except({2, 3}));
  CHECK(primeset_combine(c2, c3, PrimeSetOp::ComplementOfFirst) == PrimeSet::finite({2}));
  CHECK(primeset_combine(PrimeSet::finite({2, 3}), c3, PrimeSetOp::Intersect) == PrimeSet::finite({2}));
  CHECK(primeset_combine(PrimeSet::finite({2, 3}), c3, PrimeSetOp::Union) == PrimeSet::all());
  CHECK(PrimeSet::all_except({3, 2}).to_string() == "all primes except {2,3}");
  CHECK(PrimeSet::finite({3, 2}).to_string() == "{2,3}");
  CHECK(PrimeSet::all().to_string() == "all primes");
  CHECK(PrimeSet::none().to_string() == "{}");
  CHECK(c2.contains(3));
  CHECK_FALSE(c2.contains(2));
  CHECK_THROWS(PrimeSet::finite({4}));
}

TEST_CASE("PrimeSet De Morgan laws", "[arith]") {
  std::mt19937_64 rng(17);
  const std::vector<BigInt> pool{2, 3, 5, 7, 11, 13};
  auto random_set = [&] {
    std::vector<BigInt> ex;
    for (const auto& p : pool) {
      if (rng() % 2) ex.push_back(p);
    }
    return rng() % 2 ? PrimeSet::finite(ex) : PrimeSet::all_except(ex);
  };
  for (int i = 0; i < 500; ++i) {
    const PrimeSet a = random_set(), b = random_set();
    REQUIRE(a.unite(b).complement() == a.complement().intersect(b.complement()));
    REQUIRE(a.intersect(b).complement() == a.complement().unite(b.complement()));
    REQUIRE(a.complement().complement() == a);
    for (int p = 2; p < 20; ++p) {
      if (!is_prime(p)) continue;
      REQUIRE(a.intersect(b).contains(p) == (a.contains(p) && b.contains(p)));
      REQUIRE(a.unite(b).contains(p) == (a.contains(p) || b.contains(p)));
    }
  }
}
