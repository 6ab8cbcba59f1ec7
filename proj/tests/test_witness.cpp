#include "oracles.hpp"

#include "niltame/error.hpp"
#include "niltame/witness.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace niltame;

namespace {

const Alphabet ab("ab");
const Alphabet one("a");

// Every group of order <= 27 in the p-group corpora for p = 2, 3, 5.
const std::vector<std::pair<std::uint64_t, std::vector<FiniteGroup>>>& corpus() {
  static const auto groups = [] {
    std::vector<std::pair<std::uint64_t, std::vector<FiniteGroup>>> out;
    for (std::uint64_t p : {2, 3, 5}) out.emplace_back(p, p_group_corpus(p, 27));
    return out;
  }();
  return groups;
}

// Checks u == expected(p) as functions on every corpus group.
template <typename Expected>
void check_two_sided(const Term& u, std::size_t letters, Expected expected) {
  for (const auto& [p, groups] : corpus()) {
    const Term want = expected(p);
    for (const auto& g : groups) {
      INFO(g.label());
      Evaluator ev(g);
      for_each_assignment(g, letters, [&](const Assignment& x) {
        REQUIRE(ev.eval(u, x) == ev.eval(want, x));
        return true;
      });
    }
  }
}

Term word_term(const char* text, const Alphabet& alphabet) { return word_to_term(parse_word(text, alphabet)); }

StallingsGraph graph(const char* gens, const Alphabet& alphabet) {
  return StallingsGraph::build(parse_word_list(gens, alphabet), alphabet.size());
}

}  // namespace

TEST_CASE("uniform witness examples", "[witness]") {
  const StallingsGraph h = graph("ab,b2", ab), k = graph("a,b", ab);
  const Term u = construct_uniform_witness(h, k, PrimeSet::all_except({2}), parse_word("a", ab), ab);
  CHECK(u == parse_term("C[1; a*b, b^2](a,b)^(2^w)", ab));
  check_two_sided(u, 2, [&](std::uint64_t p) { return p == 2 ? Term::identity() : word_term("a", ab); });

  CHECK(construct_uniform_witness(h, k, PrimeSet::all_except({2}), Word(), ab) == Term::identity());
  CHECK(construct_uniform_witness(k, k, PrimeSet::all(), parse_word("ab", ab), ab) == parse_term("a*b", ab));
}

TEST_CASE("uniform witness for a longer target", "[witness]") {
  const StallingsGraph h = graph("ab,b2", ab), k = graph("a,b", ab);
  const Term u = construct_uniform_witness(h, k, PrimeSet::all_except({2}), parse_word("abAb", ab), ab);
  REQUIRE(validate_sigma(u).valid);
  check_two_sided(u, 2, [&](std::uint64_t p) { return p == 2 ? Term::identity() : word_term("abAb", ab); });
}

TEST_CASE("uniform witness errors", "[witness]") {
  const StallingsGraph h = graph("ab,b2", ab), k = graph("a,b", ab);
  CHECK_THROWS_AS(construct_uniform_witness(h, k, PrimeSet::all_except({3}), parse_word("a", ab), ab), NoDenseSubset);
  CHECK_THROWS_AS(construct_uniform_witness(h, graph("a2,b", ab), PrimeSet::all_except({2}), parse_word("a", ab), ab),
                  NotMember);
  CHECK_THROWS(construct_uniform_witness(h, k, PrimeSet::finite({3}), parse_word("a", ab), ab));
}

TEST_CASE("exceptional witness examples", "[witness]") {
  const StallingsGraph a2 = graph("a2", one), a1 = graph("a", one);
  const Term u = construct_exceptional_witness(a2, 3, {2}, parse_word("a2", one), a2, one);
  CHECK(u == parse_term("(a^2)^(2^w)*((a^2)^(6^w))^(w-1)", one));
  check_two_sided(u, 1, [&](std::uint64_t p) { return p == 3 ? word_term("a2", one) : Term::identity(); });

  const Term v = construct_exceptional_witness(a1, 2, {3}, parse_word("a", one), a1, one);
  CHECK(v == parse_term("a^(3^w)*(a^(6^w))^(w-1)", one));
  check_two_sided(v, 1, [&](std::uint64_t p) { return p == 2 ? word_term("a", one) : Term::identity(); });

  CHECK(construct_exceptional_witness(a1, 2, {3}, Word(), a1, one) == Term::identity());
}

TEST_CASE("exceptional witness through a Comp factor", "[witness]") {
  const StallingsGraph h = graph("ab,b2", ab), k = graph("a,b", ab);
  for (std::uint64_t p_i : {3, 5}) {
    const Term u = construct_exceptional_witness(h, p_i, {2}, parse_word("aB", ab), k, ab);
    INFO(print_term(u, ab));
    REQUIRE(validate_sigma(u).valid);
    check_two_sided(u, 2, [&](std::uint64_t p) { return p == p_i ? word_term("aB", ab) : Term::identity(); });
  }
  CHECK_THROWS_AS(construct_exceptional_witness(h, 2, {}, parse_word("a", ab), k, ab), NoDenseSubset);
}

TEST_CASE("combine_solutions examples", "[witness]") {
  EquationSystem system = parse_system("alphabet a\nvars x\nx : {a}* ;\nx = x\n");
  const Term v0 = parse_term("a^(3^w)", one);
  const StallingsGraph a2 = graph("a2", one);
  const Term kill = construct_exceptional_witness(a2, 3, {2}, parse_word("a2", one), a2, one);

  const SolutionMap combined =
      combine_solutions(system, {{'x', {v0}}}, {{3, {{'x', {kill}}}}}, PrimeSet::all_except({3}));
  const Term x = combined.at('x');
  CHECK(x == parse_term("a^(3^w)*(a^2)^(2^w)*((a^2)^(6^w))^(w-1)", one));
  CHECK(conforms(x, system.constraints.at('x'), 1));
  // Equals the default regime away from 3 and the exceptional regime at 3.
  check_two_sided(x, 1, [&](std::uint64_t p) { return p == 3 ? kill : v0; });
  check_two_sided(x, 1, [&](std::uint64_t p) { return p == 3 ? word_term("a2", one) : word_term("a", one); });

  CHECK(combine_solutions(system, {{'x', {v0}}}, {}, PrimeSet::all()).at('x') == v0);
  CHECK(combine_solutions(system, {{'x', {Term::identity()}}}, {{3, {{'x', {kill}}}}}, PrimeSet::all_except({3}))
            .at('x') == kill);

  CHECK_THROWS(combine_solutions(system, {{'x', {v0}}}, {{3, {{'x', {kill}}}}}, PrimeSet::all_except({5})));
  CHECK_THROWS(combine_solutions(system, {{'x', {v0, v0}}}, {}, PrimeSet::all()));
  CHECK_THROWS(combine_solutions(system, {{'x', {v0}}}, {}, PrimeSet::finite({2})));
}

TEST_CASE("combine_solutions interleaves connectors", "[witness]") {
  const EquationSystem system = parse_system("alphabet ab\nvars x\nx : {a}* b {a,b}* ;\nx = x\n");
  const auto& c = system.constraints.at('x');
  REQUIRE(c.t() == 1);
  CHECK(format_constraint(c, ab) == "{a}* b {a,b}*");
  const Term first = parse_term("a^(3^w)", ab), second = parse_term("(a*b)^2", ab);
  const SolutionMap out = combine_solutions(system, {{'x', {first, second}}}, {}, PrimeSet::all());
  CHECK(out.at('x') == Term::product_of({first, parse_term("b", ab), second}));
  CHECK(conforms(out.at('x'), c, 2));
  CHECK_FALSE(conforms(parse_term("b*a", ab), parse_constraint("{a}*", ab), 2));
}

TEST_CASE("constraint parsing", "[witness]") {
  CHECK(parse_constraint("{a}*", ab).slots == std::vector<std::vector<Word>>{{parse_word("a", ab)}});
  CHECK(parse_constraint("{}* ;", ab).slots == std::vector<std::vector<Word>>{{}});
  CHECK(parse_constraint("{a,b}* ab {b}*", ab).connectors == std::vector<Word>{parse_word("ab", ab)});
  CHECK_THROWS_AS(parse_constraint("{a", ab), ParseError);
  CHECK_THROWS_AS(parse_constraint("{c}*", ab), ParseError);
  CHECK(parse_constraint("{a,b}*", ab).permitted_letters(2) == std::vector<bool>{true, true});
}

TEST_CASE("system parsing", "[witness]") {
  const EquationSystem s = parse_system(demo_system_text());
  CHECK(s.alphabet.size() == 2);
  CHECK(s.variables == "xyz");
  CHECK(s.equations.size() == 1);
  CHECK(s.solution.size() == 3);
  CHECK(s.constraints.size() == 3);
  CHECK_THROWS_AS(parse_system("alphabet ab\nvars x\nx = q\n"), Error);
  try {
    parse_system("alphabet ab\nvars x\n\nx := a*\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("verification", "[witness]") {
  const EquationSystem trivial = parse_system("alphabet ab\nvars x\nx = x\n");
  const auto ok = verify_solution(trivial, {{'x', parse_term("a*b", ab)}}, {cyclic_group(2), quaternion_group()});
  CHECK(ok.pass);
  CHECK(ok.checks.size() == 2);
  CHECK(ok.checks[1].assignments == 64);

  const EquationSystem demo = parse_system(demo_system_text());
  const auto odd = verify_solution(demo, demo.solution,
                                   {cyclic_group(3), cyclic_group(5), cyclic_group(9), heisenberg_group(3)});
  CHECK(odd.pass);
  const auto q = verify_solution(demo, demo.solution, {quaternion_group()});
  REQUIRE_FALSE(q.pass);
  REQUIRE(q.counterexample.has_value());
  CHECK(q.counterexample->group == "quaternion8");
  CHECK(q.counterexample->assignment == std::vector<std::string>{"i", "j"});
  CHECK(q.counterexample->lhs == "-1");
  CHECK(q.counterexample->rhs == "1");

  const auto flagged = verify_solution(trivial, {{'x', parse_term("a", ab)}}, {symmetric_group(3)});
  CHECK(flagged.pass);
  CHECK_FALSE(flagged.checks[0].nilpotent);
}

TEST_CASE("non-reducibility demo", "[witness]") {
  const DemoReport r = demo_nonreducible();
  CHECK(r.odd.pass);
  CHECK_FALSE(r.two.pass);
  CHECK(r.conforms);
  CHECK(r.as_expected());
  REQUIRE(r.two.counterexample.has_value());
  CHECK(r.two.counterexample->assignment == std::vector<std::string>{"i", "j"});
  // The x-term evaluates to the identity in 2-groups.
  for (const auto& g : p_group_corpus(2, 16)) {
    Evaluator ev(g);
    for (Element a = 0; a < g.order(); ++a) {
      REQUIRE(ev.eval(r.system.solution.at('x'), Assignment{a, 0}) == g.identity());
    }
  }
  const std::string text = format_demo(r);
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
}
