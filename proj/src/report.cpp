#include "niltame/report.hpp"

#include "niltame/error.hpp"

#include <string>

namespace niltame::report {

void write_records(std::ostream& os, const std::vector<Json>& records) {
  os << Json{{"format", kFormatName}, {"version", kFormatVersion}}.dump() << '\n';
  for (const auto& r : records) os << r.dump() << '\n';
}

std::vector<Json> read_records(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("structured report is empty");
  const Json header = Json::parse(line);
  if (header.value("format", "") != kFormatName || header.value("version", 0) != kFormatVersion) {
    throw Error("not a " + std::string(kFormatName) + " version " + std::to_string(kFormatVersion) + " report");
  }
  std::vector<Json> out;
  while (std::getline(is, line)) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
  return out;
}

namespace {

Json primes_to_json(const std::vector<BigInt>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(p.str());
  return a;
}

std::vector<BigInt> primes_from_json(const Json& a) {
  std::vector<BigInt> out;
  for (const auto& p : a) out.emplace_back(p.get<std::string>());
  return out;
}

}  // namespace

Json to_json(const PrimeSet& s) {
  return {{"mode", s.is_cofinite() ? "cofinite" : "finite"}, {"exceptions", primes_to_json(s.exceptions())}};
}

PrimeSet prime_set_from_json(const Json& j) {
  auto ps = primes_from_json(j.at("exceptions"));
  return j.at("mode") == "cofinite" ? PrimeSet::all_except(std::move(ps)) : PrimeSet::finite(std::move(ps));
}

Json to_json(const Verdict& v, const Alphabet& alphabet) {
  Json w = Json::array();
  for (const auto& m : v.witnesses) {
    w.push_back({{"prime", m.prime.str()}, {"lhs", m.lhs.to_string(alphabet)}, {"rhs", m.rhs.to_string(alphabet)}});
  }
  Json j{{"record", "verdict"}, {"alphabet", alphabet.letters()}, {"equal", v.equal}, {"witnesses", w}};
  if (v.all_other_primes) {
    j["all_other_primes"] = {{"representative", v.all_other_primes->representative.str()},
                             {"lhs", v.all_other_primes->lhs.to_string(alphabet)},
                             {"rhs", v.all_other_primes->rhs.to_string(alphabet)}};
  } else {
    j["all_other_primes"] = nullptr;
  }
  return j;
}

Verdict verdict_from_json(const Json& j, const Alphabet& alphabet) {
  Verdict v;
  v.equal = j.at("equal").get<bool>();
  for (const auto& m : j.at("witnesses")) {
    v.witnesses.push_back({BigInt(m.at("prime").get<std::string>()), parse_word(m.at("lhs").get<std::string>(), alphabet),
                           parse_word(m.at("rhs").get<std::string>(), alphabet)});
  }
  if (const auto& f = j.at("all_other_primes"); !f.is_null()) {
    v.all_other_primes = Verdict::Fallback{parse_word(f.at("lhs").get<std::string>(), alphabet),
                                           parse_word(f.at("rhs").get<std::string>(), alphabet),
                                           BigInt(f.at("representative").get<std::string>())};
  }
  return v;
}

Json to_json(const PiecewiseWord& w, const Alphabet& alphabet) {
  Json cells = Json::array();
  for (const auto& [p, cell] : w.exceptions()) cells.push_back({{"prime", p.str()}, {"word", cell.to_string(alphabet)}});
  return {{"record", "normal_form"},
          {"alphabet", alphabet.letters()},
          {"cells", cells},
          {"default", w.fallback().to_string(alphabet)}};
}

PiecewiseWord piecewise_from_json(const Json& j, const Alphabet& alphabet) {
  std::map<BigInt, Word> cells;
  for (const auto& c : j.at("cells")) {
    cells.emplace(BigInt(c.at("prime").get<std::string>()), parse_word(c.at("word").get<std::string>(), alphabet));
  }
  return PiecewiseWord(parse_word(j.at("default").get<std::string>(), alphabet), std::move(cells));
}

Json to_json(const StallingsGraph& g, const Alphabet& alphabet) {
  Json gens = Json::array();
  for (const auto& w : g.generators()) gens.push_back(w.to_string(alphabet));
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back(Json::array({e.source, std::string(1, alphabet.letter(e.letter)), e.target}));
  return {{"record", "graph"},
          {"alphabet", alphabet.letters()},
          {"generators", gens},
          {"vertices", g.vertex_count()},
          {"edges", edges}};
}

StallingsGraph graph_from_json(const Json& j, const Alphabet& alphabet) {
  std::vector<Word> gens;
  for (const auto& w : j.at("generators")) gens.push_back(parse_word(w.get<std::string>(), alphabet));
  StallingsGraph g = StallingsGraph::build(gens, alphabet.size());
  if (!(to_json(g, alphabet).at("edges") == j.at("edges")) || g.vertex_count() != j.at("vertices").get<std::size_t>()) {
    throw Error("graph record is inconsistent with its generators");
  }
  return g;
}

Json to_json(const ClosureReport& r, const Alphabet& alphabet) {
  return {{"record", "closure"},
          {"method", to_string(r.method)},
          {"budget", r.budget},
          {"primes", to_json(r.primes)},
          {"sampled", primes_to_json(r.sampled)},
          {"candidate", to_json(r.candidate, alphabet)}};
}

ClosureReport closure_from_json(const Json& j, const Alphabet& alphabet) {
  const auto method = j.at("method") == "exact-density" ? ClosureReport::Method::ExactDensity : ClosureReport::Method::Oracle;
  return {graph_from_json(j.at("candidate"), alphabet), prime_set_from_json(j.at("primes")), method,
          j.at("budget").get<unsigned>(), primes_from_json(j.at("sampled"))};
}

std::vector<Json> to_json(const VerificationReport& r) {
  std::vector<Json> out;
  for (const auto& c : r.checks) {
    out.push_back({{"record", "check"},
                   {"equation", c.equation + 1},
                   {"group", c.group},
                   {"assignments", c.assignments},
                   {"status", c.pass ? "PASS" : "FAIL"},
                   {"nilpotent", c.nilpotent}});
  }
  Json v{{"record", "verification"}, {"status", r.pass ? "PASS" : "FAIL"}};
  if (r.counterexample) {
    const auto& cx = *r.counterexample;
    v["counterexample"] = {{"group", cx.group},
                           {"equation", cx.equation + 1},
                           {"assignment", cx.assignment},
                           {"lhs", cx.lhs},
                           {"rhs", cx.rhs}};
  } else {
    v["counterexample"] = nullptr;
  }
  out.push_back(std::move(v));
  return out;
}

VerificationReport verification_from_json(const std::vector<Json>& records) {
  VerificationReport r;
  bool closed = false;
  for (const auto& j : records) {
    if (closed) throw Error("records after the verification summary");
    if (j.at("record") == "check") {
      r.checks.push_back({j.at("equation").get<std::size_t>() - 1, j.at("group").get<std::string>(),
                          j.at("assignments").get<std::size_t>(), j.at("status") == "PASS",
                          j.at("nilpotent").get<bool>()});
    } else if (j.at("record") == "verification") {
      r.pass = j.at("status") == "PASS";
      if (const auto& cx = j.at("counterexample"); !cx.is_null()) {
        r.counterexample = Counterexample{cx.at("group").get<std::string>(), cx.at("equation").get<std::size_t>() - 1,
                                          cx.at("assignment").get<std::vector<std::string>>(),
                                          cx.at("lhs").get<std::string>(), cx.at("rhs").get<std::string>()};
      }
      closed = true;
    }
  }
  if (!closed) throw Error("verification summary record missing");
  return r;
}

}  // namespace niltame::report
