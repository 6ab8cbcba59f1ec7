#include "niltame/witness.hpp"

#include "niltame/abelian.hpp"
#include "niltame/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace niltame {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<bool> RationalConstraint::permitted_letters(std::size_t alphabet_size) const {
  std::vector<bool> out(alphabet_size, false);
  auto mark = [&](const Word& w) {
    for (const auto& s : w.letters()) {
      if (s.index < alphabet_size) out[s.index] = true;
    }
  };
  for (const auto& slot : slots) std::for_each(slot.begin(), slot.end(), mark);
  std::for_each(connectors.begin(), connectors.end(), mark);
  return out;
}

RationalConstraint parse_constraint(std::string_view text, const Alphabet& alphabet) {
  RationalConstraint c;
  bool expecting_slot = true;
  std::size_t i = 0;
  text = trim(text);
  if (!text.empty() && text.back() == ';') text = trim(text.substr(0, text.size() - 1));
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] == '{') {
      const auto close = text.find('}', i);
      if (close == std::string_view::npos) throw ParseError("unterminated '{'", i);
      if (close + 1 >= text.size() || text[close + 1] != '*') throw ParseError("expected '*' after '}'", close + 1);
      const std::string_view inner = trim(text.substr(i + 1, close - i - 1));
      std::vector<Word> gens;
      if (!inner.empty()) gens = parse_word_list(inner, alphabet);
      if (!expecting_slot) c.connectors.emplace_back();
      c.slots.push_back(std::move(gens));
      expecting_slot = false;
      i = close + 2;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '{') ++j;
      Word w = parse_word(text.substr(i, j - i), alphabet);
      if (expecting_slot) c.slots.emplace_back();
      c.connectors.push_back(std::move(w));
      expecting_slot = true;
      i = j;
    }
  }
  if (expecting_slot) c.slots.emplace_back();
  return c;
}

std::string format_constraint(const RationalConstraint& c, const Alphabet& alphabet) {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.slots.size(); ++i) {
    if (i) os << ' ' << c.connectors[i - 1].to_string(alphabet) << ' ';
    os << '{';
    for (std::size_t k = 0; k < c.slots[i].size(); ++k) os << (k ? "," : "") << c.slots[i][k].to_string(alphabet);
    os << "}*";
  }
  return os.str();
}

Alphabet EquationSystem::extended_alphabet() const { return Alphabet(alphabet.letters() + variables); }

EquationSystem parse_system(std::string_view text, std::optional<Alphabet> alphabet) {
  struct Line {
    std::size_t number;
    std::string_view body;
  };
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) lines.push_back({number, line});
  }
  auto fail = [](std::size_t n, const std::string& what) { return Error("line " + std::to_string(n) + ": " + what); };
  auto keyword = [](std::string_view line, std::string_view word) {
    return line.starts_with(word) && (line.size() == word.size() || std::isspace(static_cast<unsigned char>(line[word.size()])));
  };

  EquationSystem sys;
  std::optional<Alphabet> declared;
  std::vector<Line> rest;
  for (const auto& l : lines) {
    if (keyword(l.body, "alphabet")) {
      try {
        declared = Alphabet(trim(l.body.substr(8)));
      } catch (const std::exception& e) {
        throw fail(l.number, e.what());
      }
    } else if (keyword(l.body, "vars") || keyword(l.body, "variables")) {
      for (char ch : l.body.substr(l.body.find_first_of(" \t"))) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') continue;
        if (ch < 'a' || ch > 'z') throw fail(l.number, std::string("bad variable name '") + ch + "'");
        if (sys.variables.find(ch) != std::string::npos) throw fail(l.number, std::string("duplicate variable ") + ch);
        sys.variables += ch;
      }
    } else {
      rest.push_back(l);
    }
  }
  if (alphabet) declared = alphabet;
  if (!declared) throw Error("system has no alphabet line and none was given");
  sys.alphabet = *declared;
  for (char v : sys.variables) {
    if (sys.alphabet.index_of(v)) throw Error(std::string("variable ") + v + " is also an alphabet letter");
  }
  const Alphabet ext = sys.extended_alphabet();
  auto variable_at = [&](const Line& l, std::string_view name) {
    name = trim(name);
    if (name.size() != 1 || sys.variables.find(name[0]) == std::string::npos) {
      throw fail(l.number, "'" + std::string(name) + "' is not a declared variable");
    }
    return name[0];
  };
  for (const auto& l : rest) {
    try {
      if (auto pos = l.body.find(":="); pos != std::string_view::npos) {
        const char v = variable_at(l, l.body.substr(0, pos));
        sys.solution.insert_or_assign(v, parse_term(trim(l.body.substr(pos + 2)), sys.alphabet));
      } else if (auto colon = l.body.find(':'); colon != std::string_view::npos) {
        const char v = variable_at(l, l.body.substr(0, colon));
        sys.constraints.insert_or_assign(v, parse_constraint(l.body.substr(colon + 1), sys.alphabet));
      } else if (auto eq = l.body.find('='); eq != std::string_view::npos) {
        sys.equations.push_back({parse_term(trim(l.body.substr(0, eq)), ext),
                                 parse_term(trim(l.body.substr(eq + 1)), ext), std::string(l.body)});
      } else {
        throw Error("expected an equation, constraint or solution");
      }
    } catch (const Error& e) {
      const std::string what = e.what();
      if (what.starts_with("line ")) throw;
      throw fail(l.number, what);
    }
  }
  return sys;
}

std::vector<bool> letters_used(const Term& term, std::size_t alphabet_size) {
  std::vector<bool> out(alphabet_size, false);
  auto visit = [&](auto&& self, const Term& t) -> void {
    switch (t.kind()) {
      case Term::Kind::Letter:
        if (t.letter_index() >= out.size()) out.resize(t.letter_index() + 1, false);
        out[t.letter_index()] = true;
        break;
      case Term::Kind::Identity: break;
      case Term::Kind::Product:
        self(self, t.left());
        self(self, t.right());
        break;
      case Term::Kind::Power: self(self, t.base()); break;
      case Term::Kind::Comp:
        for (const auto& a : t.args()) self(self, a);
        break;
    }
  };
  visit(visit, term);
  return out;
}

bool conforms(const Term& term, const RationalConstraint& c, std::size_t alphabet_size) {
  const auto used = letters_used(term, alphabet_size);
  const auto allowed = c.permitted_letters(std::max(alphabet_size, used.size()));
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (used[i] && !allowed[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Kill-switch terms

namespace {

struct DenseChoice {
  std::vector<Word> rewritten;  // chosen generators of H over K's basis
  BigInt det;
  bool identity = false;        // rewritten[i] is basis symbol i
};

/// First size-s subset of H's generators (lexicographic in the indices)
/// whose rewritten exponent matrix has a determinant accepted by `ok`.
DenseChoice choose_subset(const StallingsGraph& h, const StallingsGraph& k, std::size_t s,
                          const std::function<bool(const BigInt&)>& ok, const std::string& requirement,
                          const Alphabet& alphabet) {
  std::vector<Word> gens;
  for (const auto& g : h.generators().empty() ? basis(h) : h.generators()) {
    if (!g.empty()) gens.push_back(g);
  }
  std::vector<Word> rewritten;
  for (const auto& g : gens) {
    try {
      rewritten.push_back(rewrite_in_basis(k, g));
    } catch (const NotMember&) {
      throw NotMember("generator " + g.to_string(alphabet) + " of H is not in K");
    }
  }
  std::ostringstream examined;
  std::size_t count = 0;
  if (gens.size() >= s) {
    std::vector<bool> pick(gens.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(s), true);
    do {
      DenseChoice c;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (pick[i]) c.rewritten.push_back(rewritten[i]);
      }
      const ExponentMatrix m = exponent_matrix(c.rewritten, s);
      c.det = det(m);
      if (c.det != 0 && ok(c.det)) {
        c.identity = true;
        for (std::size_t i = 0; i < s; ++i) c.identity &= c.rewritten[i] == Word::letter(i);
        return c;
      }
      if (count++ < 16) {
        examined << "\n  {";
        for (std::size_t i = 0, n = 0; i < gens.size(); ++i) {
          if (pick[i]) examined << (n++ ? ", " : "") << gens[i].to_string(alphabet);
        }
        examined << "}: matrix [";
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
          examined << (r ? "; " : "");
          for (Eigen::Index col = 0; col < m.cols(); ++col) examined << (col ? " " : "") << m(r, col);
        }
        examined << "], det " << c.det;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  throw NoDenseSubset("no " + std::to_string(s) + "-element subset of H's generators has " + requirement +
                      "; examined " + std::to_string(count) + " subset(s):" + examined.str());
}

Term wrap(Term base, const BigInt& m) { return Term::power(std::move(base), Exponent::power_omega(m)); }

/// Value of basis symbol j before the prime-selecting wrapper: the basis
/// word itself when the chosen generators are the basis, otherwise the
/// j-th component of the operator applied to the basis.
Term core_factor(std::size_t j, const DenseChoice& choice, const std::vector<Word>& kbasis) {
  if (choice.identity) return word_to_term(kbasis[j]);
  std::vector<Term> kappa, args;
  for (const auto& w : choice.rewritten) kappa.push_back(word_to_term(w));
  for (const auto& w : kbasis) args.push_back(word_to_term(w));
  return Term::comp(j, std::move(kappa), std::move(args));
}

Term assemble(const Word& rewritten_target, const std::function<Term(std::size_t)>& factor) {
  std::vector<Term> parts;
  const auto letters = rewritten_target.letters();
  for (std::size_t i = 0; i < letters.size();) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    const long long e = static_cast<long long>(j - i) * letters[i].sign;
    Term f = factor(letters[i].index);
    parts.push_back(e == 1 ? f : Term::power(f, Exponent::integer(e)));
    i = j;
  }
  return Term::product_of(parts);
}

Term round_trip(const Term& t, const Alphabet& alphabet) {
  const std::string text = print_term(t, alphabet);
  Term back = parse_term(text, alphabet);
  if (!(back == t)) throw std::logic_error("constructed term does not round-trip: " + text);
  return back;
}

BigInt product(const std::set<BigInt>& primes) {
  BigInt n = 1;
  for (const auto& p : primes) n *= p;
  return n;
}

}  // namespace

Term construct_uniform_witness(const StallingsGraph& h, const StallingsGraph& k, const PrimeSet& s1,
                               const Word& target, const Alphabet& alphabet) {
  if (target.empty()) return Term::identity();
  if (!s1.is_cofinite()) throw std::invalid_argument("construct_uniform_witness: S1 must be cofinite");
  if (!member(k, target)) throw NotMember("target " + target.to_string(alphabet) + " is not in K");
  const BigInt n0 = product({s1.exceptions().begin(), s1.exceptions().end()});
  const std::vector<Word> kbasis = basis(k);
  const DenseChoice choice = choose_subset(
      h, k, kbasis.size(), [&](const BigInt& d) { return divides_only(d, n0); },
      "a determinant whose primes all divide " + n0.str(), alphabet);
  const Word t = rewrite_in_basis(k, target);
  Term u = assemble(t, [&](std::size_t j) {
    Term core = core_factor(j, choice, kbasis);
    return choice.identity && n0 == 1 ? core : wrap(core, n0);
  });
  return round_trip(u, alphabet);
}

Term construct_exceptional_witness(const StallingsGraph& h, const BigInt& p_i,
                                   const std::vector<BigInt>& other_bad_primes, const Word& target,
                                   const StallingsGraph& k_pi, const Alphabet& alphabet) {
  if (target.empty()) return Term::identity();
  if (!is_prime(p_i)) throw std::invalid_argument("construct_exceptional_witness: " + p_i.str() + " is not prime");
  for (const auto& q : other_bad_primes) {
    if (!is_prime(q)) throw std::invalid_argument("construct_exceptional_witness: " + q.str() + " is not prime");
  }
  if (!member(k_pi, target)) throw NotMember("target " + target.to_string(alphabet) + " is not in K");
  const std::vector<Word> kbasis = basis(k_pi);
  const DenseChoice choice = choose_subset(
      h, k_pi, kbasis.size(), [&](const BigInt& d) { return d % p_i != 0; },
      "a determinant prime to " + p_i.str(), alphabet);
  std::set<BigInt> others(other_bad_primes.begin(), other_bad_primes.end());
  for (const auto& q : prime_divisors(choice.det)) others.insert(q);
  others.erase(p_i);
  const BigInt n_i = product(others);
  const Word t = rewrite_in_basis(k_pi, target);
  Term u = assemble(t, [&](std::size_t j) {
    const Term core = core_factor(j, choice, kbasis);
    Term keep = choice.identity && n_i == 1 ? core : wrap(core, n_i);
    Term cancel = Term::power(wrap(core, p_i * n_i), Exponent::omega_minus_one());
    return Term::product(std::move(keep), std::move(cancel));
  });
  return round_trip(u, alphabet);
}

namespace {

void flatten_into(const Term& t, std::vector<Term>& out) {
  if (t.kind() == Term::Kind::Product) {
    flatten_into(t.left(), out);
    flatten_into(t.right(), out);
  } else if (!t.is_identity()) {
    out.push_back(t);
  }
}

const std::vector<Term>& slots_for(const FactorizedSolution& sol, char x, std::size_t expected,
                                   const std::string& which) {
  auto it = sol.find(x);
  if (it == sol.end()) throw Error(which + " solution has no entry for variable " + std::string(1, x));
  if (it->second.size() != expected) {
    throw Error(which + " solution for " + std::string(1, x) + " has " + std::to_string(it->second.size()) +
                " factor(s); its constraint has " + std::to_string(expected) + " slot(s)");
  }
  return it->second;
}

}  // namespace

SolutionMap combine_solutions(const EquationSystem& system, const FactorizedSolution& default_solution,
                              const std::map<BigInt, FactorizedSolution>& exceptional, const PrimeSet& s) {
  if (!s.is_cofinite()) throw Error("combine_solutions: the default regime must be cofinite");
  std::vector<BigInt> keys;
  for (const auto& [p, sol] : exceptional) keys.push_back(p);
  if (keys != s.exceptions()) {
    throw Error("combine_solutions: exceptional solutions are given at " + PrimeSet::finite(keys).to_string() +
                " but the default regime excludes " + PrimeSet::finite(s.exceptions()).to_string());
  }
  SolutionMap out;
  for (char x : system.variables) {
    auto cit = system.constraints.find(x);
    const RationalConstraint c = cit == system.constraints.end() ? RationalConstraint{{{}}, {}} : cit->second;
    const std::size_t slots = c.slots.size();
    const auto& base = slots_for(default_solution, x, slots, "default");
    std::vector<Term> parts;
    for (std::size_t i = 0; i < slots; ++i) {
      if (!base[i].is_identity()) parts.push_back(base[i]);
      for (const auto& [p, sol] : exceptional) {
        const Term& f = slots_for(sol, x, slots, "p=" + p.str())[i];
        if (!f.is_identity()) parts.push_back(f);
      }
      if (i < c.t() && !c.connectors[i].empty()) parts.push_back(word_to_term(c.connectors[i]));
    }
    if (parts.size() <= 1) {
      out.emplace(x, parts.empty() ? Term::identity() : parts.front());
      continue;
    }
    std::vector<Term> flat;
    for (const auto& p : parts) flatten_into(p, flat);
    out.emplace(x, Term::product_of(flat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

VerificationReport verify_solution(const EquationSystem& system, const SolutionMap& sol,
                                   const std::vector<FiniteGroup>& corpus) {
  const std::size_t k = system.alphabet.size();
  std::vector<Term> images;
  for (std::size_t i = 0; i < k; ++i) images.push_back(Term::letter(i));
  for (char v : system.variables) {
    auto it = sol.find(v);
    if (it == sol.end()) throw Error(std::string("no solution given for variable ") + v);
    if (it->second.letter_bound() > k) throw Error(std::string("solution for ") + v + " uses letters outside the alphabet");
    images.push_back(it->second);
  }
  std::vector<std::pair<Term, Term>> instances;
  for (const auto& eq : system.equations) {
    instances.emplace_back(substitute(eq.lhs, images), substitute(eq.rhs, images));
  }
  VerificationReport report;
  for (const auto& g : corpus) {
    Evaluator ev(g);
    const bool nilpotent = is_nilpotent(g);
    for (std::size_t e = 0; e < instances.size(); ++e) {
      CheckRecord rec{e, g.label(), 0, true, nilpotent};
      for_each_assignment(g, k, [&](const Assignment& a) {
        ++rec.assignments;
        const Element l = ev.eval(instances[e].first, a);
        const Element r = ev.eval(instances[e].second, a);
        if (l == r) return true;
        rec.pass = false;
        if (!report.counterexample) {
          Counterexample cx{g.label(), e, {}, g.element_name(l), g.element_name(r)};
          for (auto x : a) cx.assignment.push_back(g.element_name(x));
          report.counterexample = std::move(cx);
        }
        return false;
      });
      report.pass &= rec.pass;
      report.checks.push_back(std::move(rec));
    }
  }
  return report;
}

std::string format_verification(const EquationSystem& system, const VerificationReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    os << "  " << c.group << (c.nilpotent ? "" : " (not nilpotent)") << ", equation " << c.equation + 1 << ": "
       << (c.pass ? "PASS" : "FAIL") << " (" << c.assignments << " assignment" << (c.assignments == 1 ? "" : "s")
       << ")\n";
  }
  if (report.pass) {
    os << "PASS\n";
  } else {
    const auto& cx = *report.counterexample;
    os << "FAIL in " << cx.group << " at ";
    for (std::size_t i = 0; i < cx.assignment.size(); ++i) {
      os << (i ? ", " : "") << system.alphabet.letter(i) << "↦" << cx.assignment[i];
    }
    os << ": equation " << cx.equation + 1;
    if (cx.equation < system.equations.size()) os << " (" << system.equations[cx.equation].text << ")";
    os << " gives " << cx.lhs << " ≠ " << cx.rhs << '\n';
  }
  return os.str();
}

std::vector<std::string> demo_odd_corpus() { return {"cyclic:3", "cyclic:5", "cyclic:9", "cyclic:27", "heisenberg:3"}; }
std::vector<std::string> demo_two_corpus() { return {"quaternion8", "dihedral:8"}; }

const char* demo_system_text() {
  return "alphabet ab\n"
         "vars x y z\n"
         "x : {a}* ;\n"
         "y : {a,b}* ;\n"
         "z : {b}* ;\n"
         "(x^2*a)^-1*(y^-1*z^2*b*y)^-1*(x^2*a)*(y^-1*z^2*b*y) = 1\n"
         "x := (a^(w-1))^(2^(w-1))\n"
         "z := (b^(w-1))^(2^(w-1))\n"
         "y := 1\n";
}

DemoReport demo_nonreducible() {
  DemoReport r;
  r.system = parse_system(demo_system_text());
  auto corpus = [](const std::vector<std::string>& specs) {
    std::vector<FiniteGroup> out;
    for (const auto& s : specs) out.push_back(make_group(s));
    return out;
  };
  r.odd = verify_solution(r.system, r.system.solution, corpus(demo_odd_corpus()));
  r.two = verify_solution(r.system, r.system.solution, corpus(demo_two_corpus()));
  r.conforms = true;
  for (const auto& [v, c] : r.system.constraints) {
    r.conforms &= conforms(r.system.solution.at(v), c, r.system.alphabet.size());
  }
  return r;
}

std::string format_demo(const DemoReport& r) {
  const Alphabet& a = r.system.alphabet;
  std::ostringstream os;
  os << "equation: " << r.system.equations.front().text << '\n';
  for (const auto& [v, c] : r.system.constraints) os << "constraint: " << v << " in " << format_constraint(c, a) << '\n';
  for (char v : r.system.variables) os << "solution: " << v << " := " << print_term(r.system.solution.at(v), a) << '\n';
  os << "constraints respected: " << (r.conforms ? "yes" : "no") << '\n';
  os << "odd-order corpus:\n" << format_verification(r.system, r.odd);
  os << "2-group corpus:\n" << format_verification(r.system, r.two);
  if (r.as_expected()) {
    os << "conclusion: x, y, z solve the system in every tested group of odd order and fail in 2-groups.\n"
          "For a fixed odd prime p the sigma-terms over p-groups reduce to kappa-terms, so a sigma-term\n"
          "solution would give a solution in the free group, which this equation is known not to have.\n"
          "Hence finite p-groups, and so finite nilpotent groups, are not completely sigma-reducible.\n";
  } else {
    os << "conclusion: unexpected outcome; see the reports above\n";
  }
  return os.str();
}

}  // namespace niltame
