#include "oracles.hpp"

#include "niltame/error.hpp"
#include "niltame/stallings.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace niltame;

namespace {

const Alphabet ab("ab");
Word w(const char* text) { return parse_word(text, ab); }
StallingsGraph sub(const char* gens) { return StallingsGraph::build(parse_word_list(gens, ab), 2); }
StallingsGraph cyc(long long m) { return StallingsGraph::build({Word::letter(0).pow(m)}, 1); }

std::vector<StallingsEdge> edges(std::initializer_list<StallingsEdge> e) { return e; }

// Subgroups used by the property checks below.
const char* const kCurated[] = {"a,b", "a3", "a2,b", "a2,b2", "a2,aba-1", "ab,ba", "aB,bA", "a2,ab,b2", "abAB", "a3,bab-1"};

std::vector<Word> curated_generators(const char* text) {
  std::string s(text);
  // "a-1" shorthand: rewrite into the word parser's uppercase inverse.
  for (std::size_t pos; (pos = s.find("-1")) != std::string::npos;) {
    s[pos - 1] = static_cast<char>(std::toupper(s[pos - 1]));
    s.erase(pos, 2);
  }
  return parse_word_list(s, ab);
}

}  // namespace

TEST_CASE("build examples", "[stallings]") {
  const StallingsGraph full = sub("a,b");
  CHECK(full.vertex_count() == 1);
  CHECK(full.edges() == edges({{0, 0, 0}, {0, 1, 0}}));

  const StallingsGraph c3 = sub("a3");
  CHECK(c3.vertex_count() == 3);
  CHECK(c3.edges().size() == 3);
  CHECK(c3.rank() == 1);

  const StallingsGraph h = sub("a2,abA");
  CHECK(h.vertex_count() == 2);
  CHECK(h.edges() == edges({{0, 0, 1}, {1, 0, 0}, {1, 1, 1}}));
  CHECK(format_graph(h, ab) == "v0 -a-> v1\nv1 -a-> v0\nv1 -b-> v1\n");

  CHECK(StallingsGraph(2).vertex_count() == 1);
  CHECK(sub("aA") == StallingsGraph(2));
  CHECK(format_graph(StallingsGraph(2), ab) == "v0\n");
}

TEST_CASE("folded graphs are deterministic and trimmed", "[stallings]") {
  for (const char* text : kCurated) {
    const StallingsGraph g = StallingsGraph::build(curated_generators(text), 2);
    INFO(text);
    std::vector<int> out(g.vertex_count() * 2, 0), in(g.vertex_count() * 2, 0), degree(g.vertex_count(), 0);
    for (const auto& e : g.edges()) {
      REQUIRE(++out[e.source * 2 + e.letter] == 1);
      REQUIRE(++in[e.target * 2 + e.letter] == 1);
      ++degree[e.source];
      ++degree[e.target];
    }
    for (std::size_t v = 1; v < g.vertex_count(); ++v) REQUIRE(degree[v] >= 2);
  }
}

TEST_CASE("membership examples", "[stallings]") {
  CHECK(member(sub("a2"), w("a4")));
  CHECK_FALSE(member(sub("a2"), w("a3")));
  CHECK(member(sub("a2,abA"), w("abA")));
  CHECK_FALSE(member(sub("a2,abA"), w("b")));
  CHECK(member(StallingsGraph(2), Word()));
  CHECK_FALSE(member(StallingsGraph(2), w("a")));
}

TEST_CASE("basis and rewrite examples", "[stallings]") {
  CHECK(basis(sub("a,b")) == std::vector<Word>{w("a"), w("b")});
  CHECK(basis(sub("a3")) == std::vector<Word>{w("a3")});
  const auto hb = basis(sub("a2,abA"));
  CHECK(hb.size() == 2);
  CHECK(StallingsGraph::build(hb, 2) == sub("a2,abA"));

  const Alphabet xs("xy");
  CHECK(rewrite_in_basis(sub("a,b"), w("ab")) == parse_word("xy", xs));
  CHECK(rewrite_in_basis(cyc(3), Word::letter(0).pow(-6)) == Word::letter(0).pow(-2));
  const StallingsGraph h = sub("a2,abA");
  const Word target = w("a2abA");
  const Word r = rewrite_in_basis(h, target);
  CHECK(expand_from_basis(basis(h), r) == target);
  CHECK(r.size() == 2);
  CHECK_THROWS_AS(rewrite_in_basis(sub("a2"), w("a")), NotMember);
}

TEST_CASE("folding is confluent", "[stallings]") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 300; ++i) {
    std::vector<Word> gens;
    const std::size_t count = 1 + rng() % 4;
    for (std::size_t k = 0; k < count; ++k) gens.push_back(oracle::random_word(rng, 2, 6));
    const StallingsGraph g = StallingsGraph::build(gens, 2);
    std::shuffle(gens.begin(), gens.end(), rng);
    for (auto& x : gens) {
      if (rng() % 2) x = x.inverse();
    }
    // Redundant generators do not change the subgroup.
    gens.push_back(gens.front() * gens.back());
    REQUIRE(StallingsGraph::build(gens, 2) == g);
    REQUIRE(StallingsGraph::build(basis(g), 2) == g);
  }
}

TEST_CASE("membership agrees with enumeration of generator products", "[stallings]") {
  const auto words = oracle::all_words(2, 6);
  for (const char* text : kCurated) {
    INFO(text);
    const StallingsGraph g = StallingsGraph::build(curated_generators(text), 2);
    // Basis words are read along a geodesic tree, so every member of length
    // <= 6 is a product of at most 6 basis words and inverses.
    const auto products = oracle::generator_products(basis(g), 6);
    for (const auto& x : words) REQUIRE(member(g, x) == products.contains(x));
  }
}

TEST_CASE("rewrite round-trips through the basis", "[stallings]") {
  std::mt19937_64 rng(43);
  for (const char* text : kCurated) {
    const StallingsGraph g = StallingsGraph::build(curated_generators(text), 2);
    const auto b = basis(g);
    for (int i = 0; i < 200; ++i) {
      const Word r = oracle::random_word(rng, b.size(), 5);
      const Word x = expand_from_basis(b, r);
      REQUIRE(member(g, x));
      REQUIRE(rewrite_in_basis(g, x) == r);
    }
  }
}

TEST_CASE("subgroup inclusion", "[stallings]") {
  CHECK(is_subgroup_of(sub("a2"), sub("a")));
  CHECK(is_subgroup_of(sub("a4,b2"), sub("a2,b")));
  CHECK_FALSE(is_subgroup_of(sub("a"), sub("a2")));
  CHECK(is_subgroup_of(StallingsGraph(2), sub("a2")));
}

TEST_CASE("overgroup examples", "[stallings]") {
  const auto c3 = overgroups(cyc(3));
  REQUIRE(c3.size() == 2);
  CHECK(c3[0] == cyc(3));
  CHECK(c3[1] == cyc(1));
  CHECK(overgroups(cyc(1)).size() == 1);
  const auto c2 = overgroups(cyc(2));
  REQUIRE(c2.size() == 2);
  CHECK(c2[1] == cyc(1));
  // Quotients of the 4-cycle are the 4-, 2- and 1-cycles.
  CHECK(overgroups(cyc(4)).size() == 3);
  CHECK(overgroups(cyc(6)).size() == 4);
  CHECK_THROWS(overgroups(cyc(13)));
}

TEST_CASE("overgroups contain the subgroup", "[stallings]") {
  for (const char* text : kCurated) {
    const auto gens = curated_generators(text);
    const StallingsGraph h = StallingsGraph::build(gens, 2);
    const auto lattice = overgroups(h);
    REQUIRE(lattice.front() == h);
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      for (const auto& x : gens) REQUIRE(member(lattice[i], x));
      REQUIRE(is_subgroup_of(h, lattice[i]));
      for (std::size_t j = i + 1; j < lattice.size(); ++j) REQUIRE_FALSE(lattice[i] == lattice[j]);
    }
  }
}

TEST_CASE("density examples", "[stallings]") {
  const auto d = dense_primes(sub("a2,b"));
  CHECK(d.bound == 2);
  CHECK(d.primes == PrimeSet::all_except({2}));
  CHECK(dense_primes(sub("a,b")).primes == PrimeSet::all());
  CHECK(dense_primes(sub("a2,b2")).bound == 4);
  CHECK(dense_primes(sub("a2,b2")).primes == PrimeSet::all_except({2}));
  CHECK(dense_primes(sub("abAB")).primes == PrimeSet::none());
  CHECK(dense_primes(sub("ab,ba")).primes == PrimeSet::none());
}

TEST_CASE("closure examples", "[stallings]") {
  CHECK(p_closure(cyc(3), 3).candidate == cyc(3));
  CHECK(p_closure(cyc(3), 2).candidate == cyc(1));
  CHECK(p_closure(sub("a,b"), 5).candidate == sub("a,b"));
  CHECK(p_closure(cyc(3), 2).method == ClosureReport::Method::Oracle);

  const auto r3 = stable_closure_report(cyc(3));
  CHECK(r3.candidate == cyc(1));
  CHECK(r3.primes == PrimeSet::all_except({3}));

  const auto r = stable_closure_report(sub("a2,b"));
  CHECK(r.candidate == sub("a,b"));
  CHECK(r.primes == PrimeSet::all_except({2}));

  const auto full = stable_closure_report(sub("a,b"));
  CHECK(full.candidate == sub("a,b"));
  CHECK(full.primes == PrimeSet::all());
  CHECK(full.method == ClosureReport::Method::ExactDensity);
  CHECK(to_string(full.method) == "exact-density");
}

TEST_CASE("closure of a product is the product of closures in rank one", "[stallings]") {
  auto p_part = [](long long m, long long p) {
    long long out = 1;
    while (m % p == 0) {
      m /= p;
      out *= p;
    }
    return out;
  };
  for (long long p : {2, 3, 5}) {
    for (long long m = 1; m <= 8; ++m) {
      for (long long n = 1; n <= 8; ++n) {
        // In FG(a) the product of <a^m> and <a^n> is <a^gcd(m,n)>.
        const StallingsGraph product = StallingsGraph::build({Word::letter(0).pow(m), Word::letter(0).pow(n)}, 1);
        const StallingsGraph left = p_closure(cyc(m), p).candidate;
        const StallingsGraph right = p_closure(cyc(n), p).candidate;
        REQUIRE(left == cyc(p_part(m, p)));
        const StallingsGraph product_of_closures = StallingsGraph::build(
            {basis(left).front(), basis(right).front()}, 1);
        REQUIRE(p_closure(product, p).candidate == product_of_closures);
      }
    }
  }
}
