#include "niltame/groups.hpp"

#include "niltame/error.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <sstream>

namespace niltame {

FiniteGroup::FiniteGroup(std::string label, std::vector<std::string> names,
                         const std::function<Element(Element, Element)>& multiply)
    : label_(std::move(label)), names_(std::move(names)) {
  const std::size_t n = names_.size();
  if (n == 0) throw std::invalid_argument("group must be nonempty");
  if (n > kMaxGroupOrder) throw CapExceeded("group order " + std::to_string(n) + " exceeds " + std::to_string(kMaxGroupOrder));
  table_.resize(n * n);
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      Element c = multiply(a, b);
      if (c >= n) throw std::invalid_argument("multiplication leaves the group");
      table_[a * n + b] = static_cast<std::uint16_t>(c);
    }
  }
  bool found = false;
  for (Element e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (Element x = 0; x < n && ok; ++x) ok = this->multiply(e, x) == x && this->multiply(x, e) == x;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument(label_ + ": no identity element");
  inverse_.assign(n, n);
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (this->multiply(a, b) == identity_) {
        if (this->multiply(b, a) != identity_) throw std::invalid_argument(label_ + ": one-sided inverse");
        inverse_[a] = b;
        break;
      }
    }
    if (inverse_[a] == n) throw std::invalid_argument(label_ + ": element without inverse");
  }
  orders_.resize(n);
  for (Element a = 0; a < n; ++a) {
    std::uint64_t k = 1;
    for (Element x = a; x != identity_; x = this->multiply(x, a)) ++k;
    orders_[a] = k;
  }
  // Associativity: exhaustive for small groups, random triples otherwise.
  auto check = [&](Element a, Element b, Element c) {
    if (this->multiply(this->multiply(a, b), c) != this->multiply(a, this->multiply(b, c))) {
      throw std::invalid_argument(label_ + ": multiplication is not associative");
    }
  };
  if (n <= 32) {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        for (Element c = 0; c < n; ++c) check(a, b, c);
  } else {
    std::mt19937 rng(0xa55);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(n - 1));
    for (int i = 0; i < 20'000; ++i) check(pick(rng), pick(rng), pick(rng));
  }
}

Element FiniteGroup::power(Element a, std::uint64_t z) const {
  Element result = identity_;
  Element base = a;
  z %= orders_[a];
  while (z) {
    if (z & 1U) result = multiply(result, base);
    base = multiply(base, base);
    z >>= 1U;
  }
  return result;
}

Element FiniteGroup::power(Element a, const BigInt& z) const {
  BigInt r = z % orders_[a];
  if (r < 0) r += orders_[a];
  return power(a, r.convert_to<std::uint64_t>());
}

std::optional<Element> FiniteGroup::element_named(std::string_view name) const {
  for (Element a = 0; a < order(); ++a) {
    if (names_[a] == name) return a;
  }
  return std::nullopt;
}

bool FiniteGroup::is_abelian() const {
  for (Element a = 0; a < order(); ++a)
    for (Element b = a + 1; b < order(); ++b)
      if (multiply(a, b) != multiply(b, a)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

void require_order(std::uint64_t order) {
  if (order > kMaxGroupOrder) {
    throw CapExceeded("group order " + std::to_string(order) + " exceeds " + std::to_string(kMaxGroupOrder));
  }
}

}  // namespace

FiniteGroup cyclic_group(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("cyclic group needs n >= 1");
  require_order(n);
  std::vector<std::string> names;
  for (std::uint64_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return FiniteGroup("cyclic:" + std::to_string(n), std::move(names),
                     [n](Element a, Element b) { return static_cast<Element>((a + b) % n); });
}

FiniteGroup direct_product(const std::vector<FiniteGroup>& factors) {
  if (factors.empty()) throw std::invalid_argument("product needs at least one factor");
  std::uint64_t order = 1;
  std::string label = "product:";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    order *= factors[i].order();
    require_order(order);
    const bool nested = factors[i].label().starts_with("product:");
    label += (i ? "," : "") + (nested ? "(" + factors[i].label() + ")" : factors[i].label());
  }
  // Mixed radix, first factor most significant.
  auto split = [&](Element x) {
    std::vector<Element> parts(factors.size());
    for (std::size_t i = factors.size(); i-- > 0;) {
      parts[i] = static_cast<Element>(x % factors[i].order());
      x /= static_cast<Element>(factors[i].order());
    }
    return parts;
  };
  auto join = [&](const std::vector<Element>& parts) {
    Element x = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) x = static_cast<Element>(x * factors[i].order() + parts[i]);
    return x;
  };
  std::vector<std::string> names;
  for (Element x = 0; x < order; ++x) {
    auto parts = split(x);
    std::string name = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) name += (i ? "," : "") + factors[i].element_name(parts[i]);
    names.push_back(name + ")");
  }
  return FiniteGroup(label, std::move(names), [&](Element a, Element b) {
    auto pa = split(a);
    auto pb = split(b);
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] = factors[i].multiply(pa[i], pb[i]);
    return join(pa);
  });
}

FiniteGroup heisenberg_group(std::uint64_t p) {
  if (p < 2) throw std::invalid_argument("heisenberg group needs p >= 2");
  require_order(p * p * p);
  // [x,y,z] is the matrix with x, z, y above the diagonal:
  // [x,y,z][x',y',z'] = [x+x', y+y', z+z'+x*y'].
  auto split = [p](Element e) { return std::array<std::uint64_t, 3>{e / (p * p), (e / p) % p, e % p}; };
  std::vector<std::string> names;
  for (Element e = 0; e < p * p * p; ++e) {
    auto [x, y, z] = split(e);
    names.push_back("[" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + "]");
  }
  return FiniteGroup("heisenberg:" + std::to_string(p), std::move(names), [p, split](Element a, Element b) {
    auto [x1, y1, z1] = split(a);
    auto [x2, y2, z2] = split(b);
    std::uint64_t x = (x1 + x2) % p, y = (y1 + y2) % p, z = (z1 + z2 + x1 * y2) % p;
    return static_cast<Element>((x * p + y) * p + z);
  });
}

FiniteGroup dihedral_group(std::uint64_t n) {
  if (n < 4 || n % 2) throw std::invalid_argument("dihedral group order must be even and >= 4");
  require_order(n);
  const std::uint64_t m = n / 2;
  // Element k < m is r^k; element m + k is s r^k. s r^k s = r^-k.
  std::vector<std::string> names;
  for (std::uint64_t k = 0; k < m; ++k) names.push_back(k == 0 ? "1" : "r^" + std::to_string(k));
  for (std::uint64_t k = 0; k < m; ++k) names.push_back(k == 0 ? "s" : "s*r^" + std::to_string(k));
  return FiniteGroup("dihedral:" + std::to_string(n), std::move(names), [m](Element a, Element b) {
    const bool sa = a >= m, sb = b >= m;
    const std::uint64_t ka = a % m, kb = b % m;
    // (s^sa r^ka)(s^sb r^kb) = s^(sa+sb) r^(+-ka + kb)
    const std::uint64_t k = sb ? (m - ka + kb) % m : (ka + kb) % m;
    return static_cast<Element>(((sa != sb) ? m : 0) + k);
  });
}

FiniteGroup quaternion_group() {
  // Element 2u + s is (-1)^s q_u with q = 1, i, j, k.
  static const int unit_table[4][4][2] = {
      // {unit, sign flip}
      {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
      {{1, 0}, {0, 1}, {3, 0}, {2, 1}},
      {{2, 0}, {3, 1}, {0, 1}, {1, 0}},
      {{3, 0}, {2, 0}, {1, 1}, {0, 1}},
  };
  std::vector<std::string> names = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  return FiniteGroup("quaternion8", std::move(names), [](Element a, Element b) {
    const auto& [unit, flip] = unit_table[a / 2][b / 2];
    const int sign = static_cast<int>(a % 2) ^ static_cast<int>(b % 2) ^ flip;
    return static_cast<Element>(2 * unit + sign);
  });
}

FiniteGroup symmetric_group(std::uint64_t n) {
  if (n < 1 || n > 4) throw std::invalid_argument("sym:n supports 1 <= n <= 4");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::string> names;
  for (const auto& q : perms) {
    std::string cycles;
    std::vector<bool> seen(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i] || q[i] == static_cast<int>(i)) continue;
      cycles += "(";
      for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(q[j])) {
        seen[j] = true;
        cycles += (cycles.back() == '(' ? "" : " ") + std::to_string(j + 1);
      }
      cycles += ")";
    }
    names.push_back(cycles.empty() ? "()" : cycles);
  }
  // (a*b)(i) = a(b(i)): apply b first.
  return FiniteGroup("sym:" + std::to_string(n), std::move(names), [&perms, n](Element a, Element b) {
    std::vector<int> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][static_cast<std::size_t>(perms[b][i])];
    return static_cast<Element>(std::lower_bound(perms.begin(), perms.end(), c) - perms.begin());
  });
}

namespace {

std::uint64_t parse_count(std::string_view text, std::string_view spec) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      text.size() > 9) {
    throw std::invalid_argument("bad group spec '" + std::string(spec) + "'");
  }
  return std::stoull(std::string(text));
}

std::vector<std::string_view> split_top_level(std::string_view text) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == ',' && depth == 0) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(text.substr(start));
  return out;
}

}  // namespace

FiniteGroup make_group(std::string_view spec) {
  auto strip = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    return s;
  };
  spec = strip(spec);
  if (spec == "quaternion8") return quaternion_group();
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("bad group spec '" + std::string(spec) + "'");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  if (kind == "product") {
    std::vector<std::string_view> parts = split_top_level(rest);
    std::uint64_t order = 1;
    std::vector<FiniteGroup> factors;
    for (auto part : parts) {
      factors.push_back(make_group(part));
      order *= factors.back().order();
      require_order(order);
    }
    return direct_product(factors);
  }
  const std::uint64_t n = parse_count(rest, spec);
  if (kind == "cyclic") return cyclic_group(n);
  if (kind == "heisenberg") {
    if (n > 21) require_order(n * n * n);
    return heisenberg_group(n);
  }
  if (kind == "dihedral") return dihedral_group(n);
  if (kind == "sym") return symmetric_group(n);
  throw std::invalid_argument("unknown group kind '" + std::string(kind) + "'");
}

bool is_nilpotent(const FiniteGroup& g) {
  for (const auto& p : prime_divisors(BigInt(g.order()))) {
    const auto prime = p.convert_to<std::uint64_t>();
    std::vector<Element> pelems;
    for (Element a = 0; a < g.order(); ++a) {
      std::uint64_t k = g.element_order(a);
      while (k % prime == 0) k /= prime;
      if (k == 1) pelems.push_back(a);
    }
    std::vector<bool> member(g.order(), false);
    for (auto a : pelems) member[a] = true;
    for (auto a : pelems)
      for (auto b : pelems)
        if (!member[g.multiply(a, b)]) return false;
  }
  return true;
}

std::vector<FiniteGroup> p_group_corpus(std::uint64_t p, std::uint64_t max_order) {
  if (!is_prime(BigInt(p))) throw std::invalid_argument("p_group_corpus: p must be prime");
  std::vector<FiniteGroup> out;
  std::vector<std::uint64_t> powers;
  for (std::uint64_t q = p; q <= max_order && q <= kMaxGroupOrder; q *= p) powers.push_back(q);
  for (auto q : powers) out.push_back(cyclic_group(q));
  for (std::size_t i = 0; i < powers.size(); ++i) {
    for (std::size_t j = i; j < powers.size(); ++j) {
      if (powers[i] * powers[j] <= max_order) {
        out.push_back(direct_product({cyclic_group(powers[i]), cyclic_group(powers[j])}));
      }
    }
  }
  if (p * p * p <= max_order) out.push_back(heisenberg_group(p));
  if (p == 2) {
    for (std::uint64_t q = 8; q <= max_order && q <= kMaxGroupOrder; q *= 2) out.push_back(dihedral_group(q));
    if (max_order >= 8) out.push_back(quaternion_group());
  }
  std::stable_sort(out.begin(), out.end(), [](const FiniteGroup& a, const FiniteGroup& b) {
    return a.order() != b.order() ? a.order() < b.order() : a.label() < b.label();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Operators

OperatorTable::OperatorTable(std::size_t arity, std::size_t group_order, std::vector<std::uint32_t> images)
    : arity_(arity), group_order_(group_order), images_(std::move(images)) {
  std::uint64_t expected = 1;
  for (std::size_t i = 0; i < arity; ++i) expected *= group_order;
  if (images_.size() != expected) throw std::invalid_argument("operator table has the wrong size");
}

std::uint32_t OperatorTable::encode(std::span<const Element> tuple) const {
  if (tuple.size() != arity_) throw std::invalid_argument("operator tuple has the wrong arity");
  std::uint32_t code = 0;
  for (std::size_t i = arity_; i-- > 0;) code = static_cast<std::uint32_t>(code * group_order_ + tuple[i]);
  return code;
}

std::vector<Element> OperatorTable::decode(std::uint32_t code) const {
  std::vector<Element> tuple(arity_);
  for (std::size_t i = 0; i < arity_; ++i) {
    tuple[i] = static_cast<Element>(code % group_order_);
    code = static_cast<std::uint32_t>(code / group_order_);
  }
  return tuple;
}

std::vector<Element> OperatorTable::apply(std::span<const Element> tuple) const { return decode(images_[encode(tuple)]); }

OperatorTable OperatorTable::compose(const OperatorTable& inner) const {
  if (inner.arity_ != arity_ || inner.group_order_ != group_order_) throw std::invalid_argument("compose: shape mismatch");
  std::vector<std::uint32_t> out(images_.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = images_[inner.images_[c]];
  return OperatorTable(arity_, group_order_, std::move(out));
}

bool OperatorTable::is_idempotent() const { return compose(*this) == *this; }

OperatorTable omega_power(const OperatorTable& f) {
  // Functional-graph decomposition: every point runs down a tail into a
  // cycle. For r >= every tail and divisible by every cycle length,
  // f^r(s) is the cycle point reached from s's entry point by -tail(s)
  // steps around the cycle; that is independent of the particular r.
  const std::size_t n = f.size();
  constexpr std::uint32_t kUnset = 0xffffffffU;
  std::vector<std::uint32_t> tail(n, kUnset), entry(n, kUnset), cycle_id(n, kUnset), position(n, 0);
  std::vector<std::vector<std::uint32_t>> cycles;
  std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on current path, 2 done
  std::vector<std::uint32_t> path;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (state[start]) continue;
    path.clear();
    std::uint32_t x = start;
    while (state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = f.image(x);
    }
    std::size_t resolved = path.size();
    if (state[x] == 1) {
      // New cycle: the suffix of the path from x.
      auto it = std::find(path.begin(), path.end(), x);
      std::vector<std::uint32_t> cyc(it, path.end());
      const auto id = static_cast<std::uint32_t>(cycles.size());
      for (std::uint32_t k = 0; k < cyc.size(); ++k) {
        tail[cyc[k]] = 0;
        entry[cyc[k]] = cyc[k];
        cycle_id[cyc[k]] = id;
        position[cyc[k]] = k;
        state[cyc[k]] = 2;
      }
      cycles.push_back(std::move(cyc));
      resolved = static_cast<std::size_t>(it - path.begin());
    }
    for (std::size_t k = resolved; k-- > 0;) {
      const std::uint32_t y = path[k];
      const std::uint32_t next = f.image(y);
      tail[y] = tail[next] + 1;
      entry[y] = entry[next];
      cycle_id[y] = cycle_id[next];
      state[y] = 2;
    }
  }
  std::vector<std::uint32_t> images(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    const auto& cyc = cycles[cycle_id[s]];
    const std::uint64_t len = cyc.size();
    const std::uint64_t back = (len - tail[s] % len) % len;
    images[s] = cyc[(position[entry[s]] + back) % len];
  }
  return OperatorTable(f.arity(), f.group_order(), std::move(images));
}

OperatorTable Evaluator::operator_table(const std::vector<Term>& kappa) {
  const std::size_t arity = kappa.size();
  std::uint64_t entries = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    entries *= group_.order();
    if (entries > OperatorTable::kMaxEntries) {
      throw CapExceeded("operator table |G|^n exceeds " + std::to_string(OperatorTable::kMaxEntries));
    }
  }
  std::vector<std::uint32_t> images(entries);
  std::vector<Element> tuple(arity, 0), image(arity);
  OperatorTable shape(arity, group_.order(), std::vector<std::uint32_t>(entries));
  for (std::uint32_t code = 0; code < entries; ++code) {
    tuple = shape.decode(code);
    for (std::size_t i = 0; i < arity; ++i) image[i] = eval(kappa[i], tuple);
    images[code] = shape.encode(image);
  }
  return OperatorTable(arity, group_.order(), std::move(images));
}

const OperatorTable& Evaluator::operator_omega(const std::vector<Term>& kappa) {
  static const Alphabet formal("abcdefghijklmnopqrstuvwxyz");
  std::string key;
  for (const auto& k : kappa) key += print_term(k, formal) + ";";
  auto it = omega_cache_.find(key);
  if (it == omega_cache_.end()) it = omega_cache_.emplace(key, omega_power(operator_table(kappa))).first;
  return it->second;
}

Element Evaluator::eval(const Term& term, std::span<const Element> assignment) {
  switch (term.kind()) {
    case Term::Kind::Letter:
      if (term.letter_index() >= assignment.size()) throw std::invalid_argument("missing letter assignment");
      return assignment[term.letter_index()];
    case Term::Kind::Identity: return group_.identity();
    case Term::Kind::Product:
      return group_.multiply(eval(term.left(), assignment), eval(term.right(), assignment));
    case Term::Kind::Power: {
      const Element g = eval(term.base(), assignment);
      const std::uint64_t d = group_.element_order(g);
      const Exponent& e = term.exponent();
      switch (e.kind) {
        case Exponent::Kind::Integer: return group_.power(g, e.value);
        case Exponent::Kind::OmegaMinusOne: return group_.power(g, d - 1);
        case Exponent::Kind::PowerOmega: return group_.power(g, stable_exponent(e.value, d, StableVariant::Omega));
        case Exponent::Kind::PowerOmegaMinusOne:
          return group_.power(g, stable_exponent(e.value, d, StableVariant::OmegaMinusOne));
      }
      break;
    }
    case Term::Kind::Comp: {
      std::vector<Element> args;
      args.reserve(term.arity());
      for (const auto& a : term.args()) args.push_back(eval(a, assignment));
      const OperatorTable& omega = operator_omega(term.kappa());
      return omega.apply(args)[term.component()];
    }
  }
  throw std::logic_error("eval: bad term");
}

Element Evaluator::eval(const Word& word, std::span<const Element> assignment) const {
  Element acc = group_.identity();
  for (const auto& s : word.letters()) {
    if (s.index >= assignment.size()) throw std::invalid_argument("missing letter assignment");
    const Element x = assignment[s.index];
    acc = group_.multiply(acc, s.sign > 0 ? x : group_.inverse(x));
  }
  return acc;
}

Element eval_term(const FiniteGroup& g, std::span<const Element> assignment, const Term& term) {
  Evaluator ev(g);
  return ev.eval(term, assignment);
}

OperatorTable operator_omega(const FiniteGroup& g, const std::vector<Term>& kappa) {
  Evaluator ev(g);
  return ev.operator_omega(kappa);
}

void for_each_assignment(const FiniteGroup& g, std::size_t letters,
                         const std::function<bool(const Assignment&)>& visit) {
  Assignment a(letters, 0);
  for (;;) {
    if (!visit(a)) return;
    std::size_t i = letters;
    while (i > 0) {
      --i;
      if (++a[i] < g.order()) break;
      a[i] = 0;
      if (i == 0) return;
    }
    if (letters == 0) return;
  }
}

std::optional<SeparatingWitness> find_separating_witness(const Term& u, const Term& v, std::optional<BigInt> hint,
                                                         std::uint64_t max_order, std::size_t letters) {
  std::vector<std::uint64_t> primes;
  if (hint) {
    if (!is_prime(*hint)) throw std::invalid_argument("witness hint must be prime");
    if (*hint <= max_order) primes.push_back(hint->convert_to<std::uint64_t>());
  }
  for (std::uint64_t p = 2; p <= max_order; p = next_prime(BigInt(p)).convert_to<std::uint64_t>()) {
    if (primes.empty() || primes.front() != p) primes.push_back(p);
  }
  for (auto p : primes) {
    for (const auto& g : p_group_corpus(p, max_order)) {
      Evaluator ev(g);
      std::optional<SeparatingWitness> found;
      for_each_assignment(g, letters, [&](const Assignment& a) {
        const Element x = ev.eval(u, a);
        const Element y = ev.eval(v, a);
        if (x != y) found = SeparatingWitness{g, a, x, y};
        return !found;
      });
      if (found) return found;
    }
  }
  return std::nullopt;
}

std::string format_assignment(const FiniteGroup& g, const Assignment& assignment, const Alphabet& alphabet) {
  std::ostringstream os;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    os << (i ? ", " : "") << alphabet.letter(i) << "↦" << g.element_name(assignment[i]);
  }
  return os.str();
}

}  // namespace niltame
