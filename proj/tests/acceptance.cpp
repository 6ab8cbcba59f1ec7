// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "oracles.hpp"

#include "niltame/normalize.hpp"
#include "niltame/stallings.hpp"
#include "niltame/witness.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace niltame;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

const Alphabet ab("ab");
Term t(const std::string& text) { return parse_term(text, ab); }

struct CuratedPair {
  const char* u;
  const char* v;
  bool equal;
  std::vector<int> witness_primes;  // includes the all-other-primes representative
  bool all_other_primes;
};

// Expected values derived by hand: x^(n^w) is x at primes not dividing n and 1 otherwise;
// an operator whose matrix is invertible mod p has the identity as its w-power in p-groups.
const std::vector<CuratedPair> kCurated = {
    {"a^(6^w)", "a", false, {2, 3}, false},
    {"(a^(w-1))^(w-1)", "a", true, {}, false},
    {"((a*b)^-1)^-1", "a*b", true, {}, false},
    {"(a*b)^(w-1)", "b^(w-1)*a^(w-1)", true, {}, false},
    {"a^(2^w)", "a^(3^w)", false, {2, 3}, false},
    {"a^(2^w)*a^(3^w)", "a*a^(6^w)", true, {}, false},
    {"a^(6^w)", "a^(2^w)*a^(3^w)*a^(w-1)", true, {}, false},
    {"C[1; a*b, b](a,b)^(1^w)", "a", true, {}, false},
    {"C[1; a*b, b^2](a,b)^(2^w)", "a", false, {2}, false},
    {"C[1; a^2, b^3](a,b)^(6^w)", "a", false, {2, 3}, false},
    {"C[2; a^2, b^3](a,b)^(6^w)", "C[2; a^3, b^2](a,b)^(6^w)", true, {}, false},
    {"a*b", "b*a", false, {2}, true},
    {"a^(2^w)*b", "b*a^(2^w)", false, {3}, true},
    {"(a^(w-1))^(2^w)", "(a^(2^w))^(w-1)", true, {}, false},
    {"(a*b)^(5^w)", "a^(5^w)*b^(5^w)", true, {}, false},
    {"(a*b)^(5^w)", "b^(5^w)*a^(5^w)", false, {2}, true},
    {"a^(30^w)", "1", false, {7}, true},
    {"C[1; a*b, b^2](a,b)^(2^w)*C[2; a*b, b^2](a,b)^(2^w)", "(a*b)^(2^w)", true, {}, false},
    {"C[1; a*b, b^2](a*b, b)^(2^w)", "(a*b)^(2^w)", true, {}, false},
    {"C[1; a^2*b^3, a*b](a,b)^(6^w)", "a^(6^w)", true, {}, false},
};

std::vector<BigInt> big(const std::vector<int>& xs) { return {xs.begin(), xs.end()}; }

bool is_power_of(std::uint64_t n, std::uint64_t p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

Outcome criterion1() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t ok = 0;
  for (const auto& c : kCurated) {
    const Verdict v = decide_equal(t(c.u), t(c.v));
    const bool match = v.equal == c.equal && v.witness_primes() == big(c.witness_primes) &&
                       v.all_other_primes.has_value() == c.all_other_primes;
    if (match) {
      ++ok;
    } else if (o.pass) {
      o.pass = false;
      o.detail = std::string("first mismatch ") + c.u + " vs " + c.v + "; ";
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  o.pass = o.pass && secs < 5.0;
  o.detail += std::to_string(ok) + "/" + std::to_string(kCurated.size()) + " verdicts match";
  char buf[64];
  std::snprintf(buf, sizeof buf, "; %.3f s (limit 5 s)", secs);
  o.detail += buf;
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto start = Clock::now();
  std::vector<std::pair<std::uint64_t, std::vector<FiniteGroup>>> corpora;
  for (std::uint64_t p : {2, 3, 5}) corpora.emplace_back(p, p_group_corpus(p, 27));
  std::size_t terms = 0, with_comp = 0, checks = 0, failures = 0;
  std::mt19937_64 pick(2024);
  for (std::uint64_t seed = 0; terms < 200; ++seed) {
    oracle::TermGenerator gen(seed, 2);
    const Term u = gen.term(1 + pick() % 4);
    if (u.depth() > 4 || !validate_sigma(u).valid) continue;
    ++terms;
    if (!validate_sigma(u).comps.empty()) ++with_comp;
    for (const auto& [p, groups] : corpora) {
      const Word cell = normal_form_at(u, p);
      for (const auto& g : groups) {
        Evaluator ev(g);
        for_each_assignment(g, 2, [&](const Assignment& x) {
          ++checks;
          if (ev.eval(u, x) != oracle::eval_word(g, cell, x)) ++failures;
          return true;
        });
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  o.pass = failures == 0 && with_comp > 0 && secs < 300.0;
  std::ostringstream s;
  s << terms << " terms (" << with_comp << " with Comp), " << checks << " evaluations, " << failures
    << " failures; " << secs << " s (limit 300 s)";
  o.detail = s.str();
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::size_t found = 0, needed = 0;
  for (const auto& c : kCurated) {
    if (c.equal) continue;
    for (int p : c.witness_primes) {
      ++needed;
      const std::uint64_t max_order = p == 3 ? 81 : 16;
      const auto w = find_separating_witness(t(c.u), t(c.v), BigInt(p), max_order, 2);
      if (w && is_power_of(w->group.order(), static_cast<std::uint64_t>(p)) && w->lhs != w->rhs) {
        Evaluator ev(w->group);
        if (ev.eval(t(c.u), w->assignment) != ev.eval(t(c.v), w->assignment)) {
          ++found;
          continue;
        }
      }
      if (o.pass) o.detail = std::string("missing for ") + c.u + " vs " + c.v + " at p=" + std::to_string(p) + "; ";
      o.pass = false;
    }
  }
  o.detail += std::to_string(found) + "/" + std::to_string(needed) + " separating witnesses found";
  return o;
}

Outcome criterion4() {
  // k <= 8 does not reach the limit for d = 23 (the unit group has exponent 22
  // and 11 does not divide 8!), so the brute force runs to k = 12 and records
  // which pairs had not yet settled at k = 8.
  Outcome o;
  std::size_t agree = 0, total = 0;
  std::set<std::uint64_t> unsettled_at_8;
  for (std::uint64_t n = 1; n <= 40; ++n) {
    for (std::uint64_t d = 1; d <= 40; ++d) {
      for (bool minus : {false, true}) {
        ++total;
        const auto limit = oracle::factorial_power_limit(n, d, minus, 12);
        const auto early = oracle::factorial_power_limit(n, d, minus, 8);
        if (!early || early != limit) unsettled_at_8.insert(d);
        const auto e = stable_exponent(n, d, minus ? StableVariant::OmegaMinusOne : StableVariant::Omega);
        if (limit && *limit == e) ++agree;
      }
    }
  }
  o.pass = agree == total;
  std::ostringstream s;
  s << agree << "/" << total << " agree with the k <= 12 limit; moduli not yet stable at k = 8: {";
  for (auto it = unsettled_at_8.begin(); it != unsettled_at_8.end(); ++it) s << (it == unsettled_at_8.begin() ? "" : ",") << *it;
  s << "}";
  o.detail = s.str();
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::vector<FiniteGroup> small;
  for (const char* spec : {"cyclic:2", "cyclic:4", "cyclic:6", "cyclic:8", "cyclic:9", "dihedral:8", "quaternion8",
                           "product:cyclic:2,cyclic:4", "product:cyclic:4,cyclic:4", "sym:3", "cyclic:16"})
    small.push_back(make_group(spec));
  std::size_t idempotent = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    oracle::TermGenerator gen(90'000 + seed, 2);
    const std::vector<Term> kappa{gen.kappa(2, 3), gen.kappa(2, 3)};
    const FiniteGroup& g = small[seed % small.size()];
    const OperatorTable w = operator_omega(g, kappa);
    // Independent check: T(T(x)) = T(x), and T is a positive power of the
    // operator computed by direct word evaluation.
    std::vector<std::uint32_t> f(w.size()), power(w.size());
    for (std::uint32_t code = 0; code < w.size(); ++code) {
      const auto x = w.decode(code);
      const Assignment y{oracle::eval_word(g, kappa_to_word(kappa[0]), x),
                         oracle::eval_word(g, kappa_to_word(kappa[1]), x)};
      f[code] = w.encode(y);
    }
    bool ok = true;
    for (std::uint32_t code = 0; code < w.size(); ++code) ok &= w.image(w.image(code)) == w.image(code);
    power = f;
    bool is_power = false;
    for (std::size_t k = 1; k <= w.size() + 1 && !is_power; ++k) {
      is_power = true;
      for (std::uint32_t code = 0; code < w.size(); ++code) is_power &= power[code] == w.image(code);
      for (auto& v : power) v = f[v];
    }
    if (ok && is_power) ++idempotent;
  }
  std::size_t projections = 0, operators = 0;
  const std::vector<FiniteGroup> threes{cyclic_group(3), cyclic_group(9), heisenberg_group(3)};
  for (std::uint64_t seed = 0; operators < 60; ++seed) {
    oracle::TermGenerator gen(70'000 + seed, 2);
    const std::vector<Term> kappa{gen.kappa(2, 2), gen.kappa(2, 2)};
    const BigInt d = det(operator_matrix(kappa));
    if (d % 3 == 0) continue;
    ++operators;
    BigInt m = 1;
    for (const auto& q : prime_divisors(d)) m *= q;
    bool all = true;
    for (const auto& g : threes) {
      Evaluator ev(g);
      const OperatorTable& w = ev.operator_omega(kappa);
      for (std::uint32_t code = 0; code < w.size(); ++code) all &= w.image(code) == code;
      for_each_assignment(g, 2, [&](const Assignment& x) {
        for (std::size_t j = 0; j < 2; ++j) {
          const Term c = Term::power(Term::comp(j, kappa, {Term::letter(0), Term::letter(1)}), Exponent::power_omega(m));
          all &= ev.eval(c, x) == x[j];
        }
        return all;
      });
    }
    if (all) ++projections;
  }
  o.pass = idempotent == 100 && projections == operators;
  o.detail = std::to_string(idempotent) + "/100 idempotent; projection identity on " + std::to_string(projections) +
             "/" + std::to_string(operators) + " operators with det nonzero mod 3";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const std::vector<std::string> curated{"a,b", "a3", "a2,b", "a2,b2", "a2,abA", "ab,ba", "aB,bA", "a2,ab,b2", "abAB",
                                         "a3,baB"};
  const auto words = oracle::all_words(2, 8);
  std::size_t agreeing = 0;
  for (const auto& text : curated) {
    const StallingsGraph h = StallingsGraph::build(parse_word_list(text, ab), 2);
    const auto products = oracle::generator_products(basis(h), 8);
    bool all = true;
    for (const auto& w : words) all &= member(h, w) == products.contains(w);
    // The given generators are members too.
    for (const auto& g : parse_word_list(text, ab)) all &= member(h, g);
    if (all) ++agreeing;
  }
  const auto lattice = overgroups(StallingsGraph::build({parse_word("a3", ab)}, 2));
  const auto dense = dense_primes(StallingsGraph::build(parse_word_list("a2,b", ab), 2));
  o.pass = agreeing == curated.size() && lattice.size() == 2 && dense.primes == PrimeSet::all_except({2});
  o.detail = std::to_string(agreeing) + "/" + std::to_string(curated.size()) + " subgroups agree on " +
             std::to_string(words.size()) + " words; |overgroups(<a^3>)| = " + std::to_string(lattice.size()) +
             "; dense primes of <a^2,b>: " + dense.primes.to_string();
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::vector<std::pair<std::uint64_t, std::vector<FiniteGroup>>> corpora;
  for (std::uint64_t p : {2, 3, 5}) corpora.emplace_back(p, p_group_corpus(p, 27));

  struct Case {
    std::string name;
    Term u;
    std::function<Term(std::uint64_t)> expected;
  };
  const Alphabet one("a");
  const StallingsGraph h = StallingsGraph::build(parse_word_list("ab,b2", ab), 2);
  const StallingsGraph k = StallingsGraph::build(parse_word_list("a,b", ab), 2);
  const StallingsGraph a2 = StallingsGraph::build({parse_word("aa", ab)}, 2);
  const StallingsGraph a1 = StallingsGraph::build({parse_word("a", ab)}, 2);
  const Term a = Term::letter(0);
  const Term aa = word_to_term(parse_word("aa", ab));
  const Term ab_t = word_to_term(parse_word("ab", ab));
  const Term id = Term::identity();

  std::vector<Case> cases;
  cases.push_back({"uniform <ab,b^2> target a",
                   construct_uniform_witness(h, k, PrimeSet::all_except({2}), parse_word("a", ab), ab),
                   [&](std::uint64_t p) { return p == 2 ? id : a; }});
  cases.push_back({"uniform <a,b> target ab", construct_uniform_witness(k, k, PrimeSet::all(), parse_word("ab", ab), ab),
                   [&](std::uint64_t) { return ab_t; }});
  cases.push_back({"exceptional a^2 at 3",
                   construct_exceptional_witness(a2, 3, {2}, parse_word("aa", ab), a2, ab),
                   [&](std::uint64_t p) { return p == 3 ? aa : id; }});
  cases.push_back({"exceptional a at 2", construct_exceptional_witness(a1, 2, {3}, parse_word("a", ab), a1, ab),
                   [&](std::uint64_t p) { return p == 2 ? a : id; }});
  for (std::uint64_t p_i : {3, 5}) {
    cases.push_back({"exceptional through Comp at " + std::to_string(p_i),
                     construct_exceptional_witness(h, p_i, {2}, parse_word("aB", ab), k, ab),
                     [p_i, id](std::uint64_t p) { return p == p_i ? word_to_term(parse_word("aB", ab)) : id; }});
  }

  std::size_t evaluations = 0, failures = 0;
  std::string first;
  for (const auto& c : cases) {
    for (const auto& [p, groups] : corpora) {
      const Term want = c.expected(p);
      for (const auto& g : groups) {
        Evaluator ev(g);
        for_each_assignment(g, 2, [&](const Assignment& x) {
          ++evaluations;
          if (ev.eval(c.u, x) != ev.eval(want, x)) {
            if (failures++ == 0) first = c.name + " in " + g.label();
          }
          return true;
        });
      }
    }
  }
  o.pass = failures == 0;
  o.detail = std::to_string(cases.size()) + " witness terms, " + std::to_string(evaluations) + " evaluations, " +
             std::to_string(failures) + " failures" + (first.empty() ? "" : " (first: " + first + ")");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto start = Clock::now();
  const DemoReport r = demo_nonreducible();
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool witness = r.two.counterexample.has_value() && !r.two.counterexample->assignment.empty();
  o.pass = r.as_expected() && witness && secs < 30.0;
  std::ostringstream s;
  s << "odd corpus " << (r.odd.pass ? "PASS" : "FAIL") << ", 2-group corpus " << (r.two.pass ? "PASS" : "FAIL");
  if (witness) {
    s << " (" << r.two.counterexample->group << " at";
    for (std::size_t i = 0; i < r.two.counterexample->assignment.size(); ++i)
      s << " " << ab.letter(i) << "=" << r.two.counterexample->assignment[i];
    s << ")";
  }
  s << "; " << secs << " s (limit 30 s)";
  o.detail = s.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"word-problem suite", criterion1},        {"normalization soundness", criterion2},
      {"witness confirmation", criterion3},      {"stable exponent arithmetic", criterion4},
      {"operator w-power", criterion5},          {"Stallings suite", criterion6},
      {"kill-switch witnesses", criterion7},     {"non-reducibility demo", criterion8},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all &= o.pass;
    std::cout << "criterion " << i + 1 << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " | "
              << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
