#include "niltame/stallings.hpp"

#include "niltame/abelian.hpp"
#include "niltame/error.hpp"
#include "niltame/groups.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace niltame {

namespace {

constexpr std::uint32_t kNone = 0xffffffffU;

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0U); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // The smaller root survives so the base stays a root.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace

StallingsGraph::StallingsGraph(std::size_t alphabet_size)
    : alphabet_size_(alphabet_size), out_(alphabet_size, kNone), in_(alphabet_size, kNone) {}

std::optional<std::uint32_t> StallingsGraph::step(std::uint32_t v, SignedLetter s) const {
  if (s.index >= alphabet_size_ || v >= vertices_) return std::nullopt;
  const std::uint32_t t = (s.sign > 0 ? out_ : in_)[v * alphabet_size_ + s.index];
  if (t == kNone) return std::nullopt;
  return t;
}

StallingsGraph fold_graph(std::size_t alphabet_size, std::size_t vertex_count, std::vector<StallingsEdge> edges,
                          std::vector<Word> generators) {
  // Fold: identify endpoints of equally labelled edges until none remain.
  UnionFind uf(vertex_count);
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<std::uint32_t, std::size_t>, std::uint32_t> out, in;
    for (const auto& e : edges) {
      const std::uint32_t s = uf.find(e.source), t = uf.find(e.target);
      if (auto [it, fresh] = out.emplace(std::pair{s, e.letter}, t); !fresh) changed |= uf.unite(it->second, t);
      if (auto [it, fresh] = in.emplace(std::pair{uf.find(t), e.letter}, uf.find(s)); !fresh) {
        changed |= uf.unite(it->second, s);
      }
    }
  }
  std::set<StallingsEdge> folded;
  for (const auto& e : edges) folded.insert({uf.find(e.source), e.letter, uf.find(e.target)});

  // Trim: drop non-base vertices of degree <= 1 until none remain.
  std::vector<std::size_t> degree(vertex_count, 0);
  for (const auto& e : folded) {
    ++degree[e.source];
    ++degree[e.target];
  }
  std::vector<bool> removed(vertex_count, false);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 1; v < vertex_count; ++v) {
    if (uf.find(v) == v && degree[v] <= 1) queue.push_back(v);
    if (uf.find(v) != v) removed[v] = true;
  }
  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    if (removed[v]) continue;
    removed[v] = true;
    for (auto it = folded.begin(); it != folded.end();) {
      if (it->source == v || it->target == v) {
        const std::uint32_t other = it->source == v ? it->target : it->source;
        if (other != v && --degree[other] <= 1 && other != 0 && !removed[other]) queue.push_back(other);
        it = folded.erase(it);
      } else {
        ++it;
      }
    }
  }

  // Canonical breadth-first numbering.
  std::map<std::pair<std::uint32_t, std::size_t>, std::uint32_t> out, in;
  for (const auto& e : folded) {
    out[{e.source, e.letter}] = e.target;
    in[{e.target, e.letter}] = e.source;
  }
  std::vector<std::uint32_t> label(vertex_count, kNone);
  std::vector<std::uint32_t> order{0};
  label[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint32_t v = order[head];
    for (std::size_t a = 0; a < alphabet_size; ++a) {
      for (const auto* adj : {&out, &in}) {
        auto it = adj->find({v, a});
        if (it != adj->end() && label[it->second] == kNone) {
          label[it->second] = static_cast<std::uint32_t>(order.size());
          order.push_back(it->second);
        }
      }
    }
  }
  StallingsGraph g(alphabet_size);
  g.vertices_ = order.size();
  g.generators_ = std::move(generators);
  for (const auto& e : folded) g.edges_.push_back({label[e.source], e.letter, label[e.target]});
  std::sort(g.edges_.begin(), g.edges_.end());
  g.out_.assign(g.vertices_ * alphabet_size, kNone);
  g.in_.assign(g.vertices_ * alphabet_size, kNone);
  for (const auto& e : g.edges_) {
    g.out_[e.source * alphabet_size + e.letter] = e.target;
    g.in_[e.target * alphabet_size + e.letter] = e.source;
  }
  return g;
}

StallingsGraph StallingsGraph::build(const std::vector<Word>& generators, std::size_t alphabet_size) {
  std::vector<StallingsEdge> edges;
  std::uint32_t vertices = 1;
  for (const auto& w : generators) {
    std::uint32_t at = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const SignedLetter s = w.letters()[i];
      if (s.index >= alphabet_size) throw std::invalid_argument("generator uses a letter outside the alphabet");
      const std::uint32_t next = i + 1 == w.size() ? 0 : vertices++;
      if (s.sign > 0) {
        edges.push_back({at, s.index, next});
      } else {
        edges.push_back({next, s.index, at});
      }
      at = next;
    }
  }
  return fold_graph(alphabet_size, vertices, std::move(edges), generators);
}

bool member(const StallingsGraph& h, const Word& w) {
  std::uint32_t v = 0;
  for (const auto& s : w.letters()) {
    auto next = h.step(v, s);
    if (!next) return false;
    v = *next;
  }
  return v == 0;
}

namespace {

struct SpanningTree {
  std::vector<Word> prefix;          // base-to-vertex word along the tree
  std::vector<std::size_t> nontree;  // edge index -> basis index, or npos
};

SpanningTree spanning_tree(const StallingsGraph& h) {
  SpanningTree t;
  t.prefix.assign(h.vertex_count(), Word());
  std::vector<bool> reached(h.vertex_count(), false);
  std::vector<bool> tree_edge(h.edges().size(), false);
  reached[0] = true;
  std::vector<std::uint32_t> order{0};
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint32_t v = order[head];
    for (std::size_t a = 0; a < h.alphabet_size(); ++a) {
      for (int sign : {1, -1}) {
        auto w = h.step(v, {a, sign});
        if (!w || reached[*w]) continue;
        reached[*w] = true;
        t.prefix[*w] = t.prefix[v] * Word::letter(a, sign);
        order.push_back(*w);
        const StallingsEdge e = sign > 0 ? StallingsEdge{v, a, *w} : StallingsEdge{*w, a, v};
        auto it = std::lower_bound(h.edges().begin(), h.edges().end(), e);
        tree_edge[static_cast<std::size_t>(it - h.edges().begin())] = true;
      }
    }
  }
  std::size_t next = 0;
  t.nontree.assign(h.edges().size(), std::string::npos);
  for (std::size_t i = 0; i < h.edges().size(); ++i) {
    if (!tree_edge[i]) t.nontree[i] = next++;
  }
  return t;
}

}  // namespace

std::vector<Word> basis(const StallingsGraph& h) {
  const SpanningTree t = spanning_tree(h);
  std::vector<Word> out;
  for (std::size_t i = 0; i < h.edges().size(); ++i) {
    if (t.nontree[i] == std::string::npos) continue;
    const auto& e = h.edges()[i];
    out.push_back(t.prefix[e.source] * Word::letter(e.letter) * t.prefix[e.target].inverse());
  }
  return out;
}

Word rewrite_in_basis(const StallingsGraph& k, const Word& w) {
  if (!member(k, w)) throw NotMember("word is not in the subgroup");
  const SpanningTree t = spanning_tree(k);
  std::vector<SignedLetter> raw;
  std::uint32_t v = 0;
  for (const auto& s : w.letters()) {
    const std::uint32_t next = *k.step(v, s);
    const StallingsEdge e = s.sign > 0 ? StallingsEdge{v, s.index, next} : StallingsEdge{next, s.index, v};
    const auto idx = static_cast<std::size_t>(std::lower_bound(k.edges().begin(), k.edges().end(), e) - k.edges().begin());
    if (t.nontree[idx] != std::string::npos) raw.push_back({t.nontree[idx], s.sign});
    v = next;
  }
  return Word::reduce(raw);
}

Word expand_from_basis(const std::vector<Word>& basis_words, const Word& rewritten) {
  Word out;
  for (const auto& s : rewritten.letters()) {
    const Word& b = basis_words.at(s.index);
    out = out * (s.sign > 0 ? b : b.inverse());
  }
  return out;
}

bool is_subgroup_of(const StallingsGraph& a, const StallingsGraph& b) {
  for (const auto& w : basis(a)) {
    if (!member(b, w)) return false;
  }
  return true;
}

std::vector<StallingsGraph> overgroups(const StallingsGraph& h) {
  if (h.vertex_count() > kMaxOvergroupVertices) {
    throw CapExceeded("overgroup enumeration is limited to " + std::to_string(kMaxOvergroupVertices) +
                      " vertices; graph has " + std::to_string(h.vertex_count()));
  }
  // Every folded quotient is reached by merging two vertices and refolding,
  // repeatedly.
  std::vector<StallingsGraph> found{h};
  std::set<std::pair<std::size_t, std::vector<StallingsEdge>>> seen{{h.vertex_count(), h.edges()}};
  for (std::size_t head = 0; head < found.size(); ++head) {
    const StallingsGraph g = found[head];
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) {
      for (std::uint32_t v = u + 1; v < g.vertex_count(); ++v) {
        std::vector<StallingsEdge> edges = g.edges();
        for (auto& e : edges) {
          if (e.source == v) e.source = u;
          if (e.target == v) e.target = u;
        }
        StallingsGraph q = fold_graph(g.alphabet_size(), g.vertex_count(), std::move(edges), {});
        if (seen.insert({q.vertex_count(), q.edges()}).second) found.push_back(std::move(q));
      }
    }
  }
  for (auto& g : found) {
    if (g.generators().empty() && !(g == h)) g = StallingsGraph::build(basis(g), g.alphabet_size());
  }
  std::sort(found.begin() + 1, found.end(), [](const StallingsGraph& a, const StallingsGraph& b) {
    if (a.vertex_count() != b.vertex_count()) return a.vertex_count() > b.vertex_count();
    return a.edges() < b.edges();
  });
  return found;
}

DensityData dense_primes(const StallingsGraph& h) {
  const BigInt d = nondense_prime_bound(exponent_matrix(basis(h), h.alphabet_size()));
  if (d == 0) return {d, PrimeSet::none()};
  return {d, PrimeSet::all_except(prime_divisors(d))};
}

std::string to_string(ClosureReport::Method m) { return m == ClosureReport::Method::ExactDensity ? "exact-density" : "oracle"; }

namespace {

std::vector<FiniteGroup> oracle_corpus(std::uint64_t p, unsigned budget) {
  std::vector<FiniteGroup> out;
  std::uint64_t q = 1;
  for (unsigned k = 1; k <= budget; ++k) {
    if (q * p > kMaxGroupOrder) break;
    q *= p;
    out.push_back(cyclic_group(q));
    if (2 * k <= budget && q * q <= kMaxGroupOrder) out.push_back(direct_product({cyclic_group(q), cyclic_group(q)}));
  }
  if (budget >= 3 && p * p * p <= kMaxGroupOrder) out.push_back(heisenberg_group(p));
  return out;
}

/// Marks lattice members that some homomorphism separates from h.
std::vector<bool> separated(const StallingsGraph& h, const std::vector<StallingsGraph>& lattice,
                            const std::vector<FiniteGroup>& corpus) {
  const std::vector<Word> hgens = basis(h);
  std::vector<std::vector<Word>> kgens;
  for (const auto& k : lattice) kgens.push_back(basis(k));
  std::vector<bool> out(lattice.size(), false);
  for (const auto& g : corpus) {
    Evaluator ev(g);
    std::vector<bool> in_image(g.order());
    std::vector<Element> images;
    for_each_assignment(g, h.alphabet_size(), [&](const Assignment& phi) {
      images.clear();
      for (const auto& w : hgens) images.push_back(ev.eval(w, phi));
      std::fill(in_image.begin(), in_image.end(), false);
      std::vector<Element> stack{g.identity()};
      in_image[g.identity()] = true;
      while (!stack.empty()) {
        const Element x = stack.back();
        stack.pop_back();
        for (auto y : images) {
          const Element z = g.multiply(x, y);
          if (!in_image[z]) {
            in_image[z] = true;
            stack.push_back(z);
          }
        }
      }
      bool all_done = true;
      for (std::size_t i = 0; i < lattice.size(); ++i) {
        if (out[i]) continue;
        for (const auto& w : kgens[i]) {
          if (!in_image[ev.eval(w, phi)]) {
            out[i] = true;
            break;
          }
        }
        all_done &= out[i];
      }
      return !all_done;
    });
  }
  return out;
}

StallingsGraph maximal_unseparated(const StallingsGraph& h, const std::vector<StallingsGraph>& lattice,
                                   const std::vector<bool>& sep) {
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (!sep[i]) alive.push_back(i);
  }
  // Lattice order puts fewer vertices (larger subgroups) last; the last
  // member not strictly inside another survivor wins.
  for (std::size_t i : alive) {
    bool maximal = true;
    for (std::size_t j : alive) {
      if (i != j && !(lattice[i] == lattice[j]) && is_subgroup_of(lattice[i], lattice[j])) {
        maximal = false;
        break;
      }
    }
    if (maximal) return lattice[i];
  }
  return h;
}

}  // namespace

ClosureReport p_closure(const StallingsGraph& h, const BigInt& p, unsigned budget) {
  if (!is_prime(p)) throw std::invalid_argument("p_closure: " + p.str() + " is not prime");
  if (budget == 0) throw std::invalid_argument("p_closure: budget must be positive");
  const std::vector<StallingsGraph> lattice = overgroups(h);
  const std::vector<bool> sep =
      p > kMaxGroupOrder ? std::vector<bool>(lattice.size(), false)
                         : separated(h, lattice, oracle_corpus(p.convert_to<std::uint64_t>(), budget));
  ClosureReport r{maximal_unseparated(h, lattice, sep), PrimeSet::finite({p}), ClosureReport::Method::Oracle, budget, {p}};
  return r;
}

ClosureReport stable_closure_report(const StallingsGraph& h, unsigned budget) {
  const std::vector<StallingsGraph> lattice = overgroups(h);
  if (lattice.size() == 1) return {h, PrimeSet::all(), ClosureReport::Method::ExactDensity, budget, {}};
  std::set<BigInt> bad;
  for (const auto& l : lattice) {
    for (const auto& q : prime_divisors(dense_primes(l).bound)) bad.insert(q);
  }
  std::vector<BigInt> samples;
  for (BigInt p = 2; samples.size() < 3; p = next_prime(p)) {
    if (!bad.contains(p)) samples.push_back(p);
  }
  std::vector<StallingsGraph> results;
  for (const auto& p : samples) results.push_back(p_closure(h, p, budget).candidate);
  // Majority vote, earliest sample on ties.
  std::size_t best = 0, best_votes = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto votes = static_cast<std::size_t>(std::count(results.begin(), results.end(), results[i]));
    if (votes > best_votes) {
      best = i;
      best_votes = votes;
    }
  }
  std::vector<BigInt> excluded(bad.begin(), bad.end());
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!(results[i] == results[best])) excluded.push_back(samples[i]);
  }
  return {results[best], PrimeSet::all_except(std::move(excluded)), ClosureReport::Method::Oracle, budget,
          std::move(samples)};
}

std::string format_graph(const StallingsGraph& h, const Alphabet& alphabet) {
  std::ostringstream os;
  if (h.edges().empty()) os << "v0\n";
  for (const auto& e : h.edges()) {
    os << 'v' << e.source << " -" << alphabet.letter(e.letter) << "-> v" << e.target << '\n';
  }
  return os.str();
}

}  // namespace niltame
