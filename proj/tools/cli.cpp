#include "niltame/cli.hpp"

#include "niltame/error.hpp"
#include "niltame/groups.hpp"
#include "niltame/normalize.hpp"
#include "niltame/report.hpp"
#include "niltame/stallings.hpp"
#include "niltame/witness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace niltame::cli {

namespace {

using report::Json;

enum class Format { Text, Structured };

struct Common {
  std::string alphabet;
  std::string format = "text";
  Format fmt() const { return format == "structured" ? Format::Structured : Format::Text; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string load_term_text(const std::string& arg) {
  if (!arg.starts_with('@')) return arg;
  std::string text = read_file(arg.substr(1));
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) text.pop_back();
  return text;
}

Term read_term(const std::string& arg, const Alphabet& alphabet) {
  const std::string text = load_term_text(arg);
  try {
    return parse_term(text, alphabet);
  } catch (const ParseError& e) {
    throw std::runtime_error(std::string(e.what()) + "\n  " + text + "\n  " + std::string(e.position(), ' ') + "^");
  }
}

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Assignment parse_assignment(const std::string& text, const FiniteGroup& g, const Alphabet& alphabet) {
  Assignment a(alphabet.size(), g.identity());
  if (text.empty()) return a;
  for (const auto& item : split_top_level(text)) {
    const auto eq = item.find('=');
    if (eq != 1) throw Error("assignment entries look like a=<element>, got '" + item + "'");
    const auto idx = alphabet.index_of(item[0]);
    if (!idx) throw Error(std::string("'") + item[0] + "' is not an alphabet letter");
    const auto value = g.element_named(item.substr(2));
    if (!value) throw Error("'" + item.substr(2) + "' is not an element of " + g.label());
    a[*idx] = *value;
  }
  return a;
}

std::string format_rewritten(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  const auto letters = w.letters();
  for (std::size_t i = 0; i < letters.size();) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    const long long e = static_cast<long long>(j - i) * letters[i].sign;
    os << (i ? "*" : "") << 'x' << letters[i].index + 1;
    if (e != 1) os << '^' << e;
    i = j;
  }
  return os.str();
}

std::string join_words(const std::vector<Word>& words, const Alphabet& alphabet) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) out += (i ? ", " : "") + words[i].to_string(alphabet);
  return out.empty() ? "(none)" : out;
}

void emit(std::ostream& out, Format fmt, const std::string& text, const std::vector<Json>& records) {
  if (fmt == Format::Structured) {
    report::write_records(out, records);
  } else {
    out << text;
  }
}

std::vector<FiniteGroup> corpus_from(const std::vector<std::string>& specs) {
  std::vector<FiniteGroup> out;
  for (const auto& s : specs) out.push_back(make_group(s));
  return out;
}

std::vector<FiniteGroup> default_corpus() {
  std::vector<FiniteGroup> out;
  for (auto [p, bound] : {std::pair<std::uint64_t, std::uint64_t>{2, 8}, {3, 27}, {5, 25}}) {
    for (auto& g : p_group_corpus(p, bound)) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Word problem, evaluation and subgroup tools for implicit operations over finite nilpotent groups",
               "niltame"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  Common common;
  auto add_common = [&](CLI::App* sub, bool need_alphabet) {
    auto* opt = sub->add_option("--alphabet", common.alphabet, "Alphabet letters, e.g. ab");
    if (need_alphabet) opt->required();
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  };

  std::function<int()> action;

  // decide
  std::string lhs_arg, rhs_arg;
  bool want_witness = false;
  std::uint64_t max_order = 81;
  auto* decide = app.add_subcommand("decide", "Decide u = v over finite nilpotent groups");
  add_common(decide, true);
  decide->add_option("u", lhs_arg, "Left term (or @file)")->required();
  decide->add_option("v", rhs_arg, "Right term (or @file)")->required();
  decide->add_flag("--witness", want_witness, "Search a separating group for each unequal prime");
  decide->add_option("--max-order", max_order, "Largest group order for --witness")->capture_default_str();
  decide->callback([&] {
    action = [&]() -> int {
      const Alphabet a(common.alphabet);
      const Term u = read_term(lhs_arg, a);
      const Term v = read_term(rhs_arg, a);
      const Verdict verdict = decide_equal(u, v);
      std::string text = format_verdict(verdict, a);
      std::vector<Json> records{report::to_json(verdict, a)};
      if (want_witness && !verdict.equal) {
        for (const auto& p : verdict.witness_primes()) {
          auto w = find_separating_witness(u, v, p, max_order, a.size());
          Json j{{"record", "separating_witness"}, {"prime", p.str()}};
          if (w) {
            text += "witness for p=" + p.str() + ": " + w->group.label() + " with " +
                    format_assignment(w->group, w->assignment, a) + " gives " + w->group.element_name(w->lhs) +
                    " ≠ " + w->group.element_name(w->rhs) + "\n";
            std::vector<std::string> names;
            for (auto x : w->assignment) names.push_back(w->group.element_name(x));
            j["group"] = w->group.label();
            j["assignment"] = names;
            j["lhs"] = w->group.element_name(w->lhs);
            j["rhs"] = w->group.element_name(w->rhs);
          } else {
            text += "witness for p=" + p.str() + ": none found up to order " + std::to_string(max_order) + "\n";
            j["group"] = nullptr;
          }
          records.push_back(std::move(j));
        }
      }
      emit(out, common.fmt(), text, records);
      return verdict.equal ? kExitOk : kExitNegative;
    };
  });

  // normalize
  std::string term_arg;
  std::optional<std::string> prime_arg;
  auto* normalize_cmd = app.add_subcommand("normalize", "Per-prime free-group normal form of a term");
  add_common(normalize_cmd, true);
  normalize_cmd->add_option("term", term_arg, "Term (or @file)")->required();
  normalize_cmd->add_option("--prime", prime_arg, "Only the cell containing this prime");
  normalize_cmd->callback([&] {
    action = [&]() -> int {
      const Alphabet a(common.alphabet);
      const PiecewiseWord nf = normalize(read_term(term_arg, a));
      if (prime_arg) {
        const BigInt p(*prime_arg);
        if (!is_prime(p)) throw Error(*prime_arg + " is not prime");
        const Word& w = nf.at(p);
        emit(out, common.fmt(), "p=" + p.str() + ": " + w.to_string(a) + "\n",
             {Json{{"record", "cell"}, {"prime", p.str()}, {"word", w.to_string(a)}}});
      } else {
        emit(out, common.fmt(), format_piecewise(nf, a), {report::to_json(nf, a)});
      }
      return kExitOk;
    };
  });

  // eval
  std::string group_arg, assign_arg;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a term in a finite group");
  add_common(eval_cmd, true);
  eval_cmd->add_option("term", term_arg, "Term (or @file)")->required();
  eval_cmd->add_option("--group", group_arg, "Group, e.g. cyclic:6, heisenberg:3, quaternion8")->required();
  eval_cmd->add_option("--assign", assign_arg, "Letter values, e.g. a=1,b=2 (default identity)");
  eval_cmd->callback([&] {
    action = [&]() -> int {
      const Alphabet a(common.alphabet);
      const Term t = read_term(term_arg, a);
      const FiniteGroup g = make_group(group_arg);
      const Assignment asg = parse_assignment(assign_arg, g, a);
      const Element value = eval_term(g, asg, t);
      emit(out, common.fmt(), g.element_name(value) + "\n",
           {Json{{"record", "evaluation"},
                 {"group", g.label()},
                 {"term", print_term(t, a)},
                 {"assignment", format_assignment(g, asg, a)},
                 {"value", g.element_name(value)}}});
      return kExitOk;
    };
  });

  // stallings
  std::string gens_arg;
  bool want_overgroups = false, want_dense = false, want_basis = false;
  std::vector<std::string> member_args, rewrite_args;
  auto* stallings_cmd = app.add_subcommand("stallings", "Stallings automaton of a finitely generated subgroup");
  add_common(stallings_cmd, true);
  stallings_cmd->add_option("--gens", gens_arg, "Generators, e.g. a2,abA")->required();
  stallings_cmd->add_flag("--overgroups", want_overgroups, "List the overgroups");
  stallings_cmd->add_flag("--dense", want_dense, "Report the primes where the subgroup is dense");
  stallings_cmd->add_flag("--basis", want_basis, "Print a free basis");
  stallings_cmd->add_option("--member", member_args, "Test membership of a word");
  stallings_cmd->add_option("--rewrite", rewrite_args, "Rewrite a word in the basis");
  stallings_cmd->callback([&] {
    action = [&]() -> int {
      const Alphabet a(common.alphabet);
      const StallingsGraph h = StallingsGraph::build(parse_word_list(gens_arg, a), a.size());
      std::ostringstream text;
      std::vector<Json> records{report::to_json(h, a)};
      text << "graph (" << h.vertex_count() << " vertices, rank " << h.rank() << "):\n" << format_graph(h, a);
      if (want_basis) {
        const auto b = basis(h);
        text << "basis: " << join_words(b, a) << '\n';
        Json words = Json::array();
        for (const auto& w : b) words.push_back(w.to_string(a));
        records.push_back({{"record", "basis"}, {"words", words}});
      }
      for (const auto& m : member_args) {
        const Word w = parse_word(m, a);
        const bool in = member(h, w);
        text << "member " << w.to_string(a) << ": " << (in ? "yes" : "no") << '\n';
        records.push_back({{"record", "membership"}, {"word", w.to_string(a)}, {"member", in}});
      }
      for (const auto& r : rewrite_args) {
        const Word w = parse_word(r, a);
        const std::string rewritten = format_rewritten(rewrite_in_basis(h, w));
        text << "rewrite " << w.to_string(a) << ": " << rewritten << '\n';
        records.push_back({{"record", "rewrite"}, {"word", w.to_string(a)}, {"rewritten", rewritten}});
      }
      if (want_dense) {
        const DensityData d = dense_primes(h);
        text << "density bound d=" << d.bound << "; dense at " << d.primes.to_string() << '\n';
        records.push_back({{"record", "density"}, {"bound", d.bound.str()}, {"primes", report::to_json(d.primes)}});
      }
      if (want_overgroups) {
        const auto all = overgroups(h);
        text << "overgroups: " << all.size() << '\n';
        for (std::size_t i = 0; i < all.size(); ++i) {
          text << "[" << i + 1 << "] basis " << join_words(basis(all[i]), a) << '\n' << format_graph(all[i], a);
          Json j = report::to_json(all[i], a);
          j["record"] = "overgroup";
          records.push_back(std::move(j));
        }
      }
      emit(out, common.fmt(), text.str(), records);
      return kExitOk;
    };
  });

  // closure
  unsigned budget = 0;
  auto* closure_cmd = app.add_subcommand("closure", "Oracle estimate of the pro-p closure of a subgroup");
  add_common(closure_cmd, true);
  closure_cmd->add_option("--gens", gens_arg, "Generators, e.g. a3")->required();
  closure_cmd->add_option("--prime", prime_arg, "Close at this prime (default: stable closure report)");
  closure_cmd->add_option("--budget", budget, "Test groups have order at most p^budget");
  closure_cmd->callback([&] {
    action = [&]() -> int {
      const Alphabet a(common.alphabet);
      const StallingsGraph h = StallingsGraph::build(parse_word_list(gens_arg, a), a.size());
      ClosureReport r;
      if (prime_arg) {
        r = p_closure(h, BigInt(*prime_arg), budget ? budget : kDefaultClosureBudget);
      } else {
        r = budget ? stable_closure_report(h, budget) : stable_closure_report(h);
      }
      std::ostringstream text;
      text << "closure: basis " << join_words(basis(r.candidate), a) << '\n'
           << format_graph(r.candidate, a) << "primes: " << r.primes.to_string() << '\n'
           << "method: " << to_string(r.method) << " (budget " << r.budget << ")\n";
      if (!r.sampled.empty()) {
        text << "sampled primes:";
        for (const auto& p : r.sampled) text << ' ' << p;
        text << '\n';
      }
      emit(out, common.fmt(), text.str(), {report::to_json(r, a)});
      return kExitOk;
    };
  });

  // verify
  std::string system_path;
  std::vector<std::string> group_args;
  auto* verify_cmd = app.add_subcommand("verify", "Check a solved equation system over a corpus of groups");
  add_common(verify_cmd, false);
  verify_cmd->add_option("system", system_path, "System file")->required();
  verify_cmd->add_option("--group", group_args, "Corpus group (repeatable; default: small p-groups)");
  verify_cmd->callback([&] {
    action = [&]() -> int {
      std::optional<Alphabet> override;
      if (!common.alphabet.empty()) override = Alphabet(common.alphabet);
      const EquationSystem sys = parse_system(read_file(system_path), override);
      const auto corpus = group_args.empty() ? default_corpus() : corpus_from(group_args);
      const VerificationReport r = verify_solution(sys, sys.solution, corpus);
      std::string text = format_verification(sys, r);
      for (const auto& [v, c] : sys.constraints) {
        if (!conforms(sys.solution.at(v), c, sys.alphabet.size())) {
          text += std::string("warning: solution for ") + v + " uses letters outside " + format_constraint(c, sys.alphabet) + "\n";
        }
      }
      emit(out, common.fmt(), text, report::to_json(r));
      return r.pass ? kExitOk : kExitNegative;
    };
  });

  // demo-nonreducible
  auto* demo_cmd = app.add_subcommand("demo-nonreducible", "Commutator equation solvable only by implicit operations");
  demo_cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  demo_cmd->callback([&] {
    action = [&]() -> int {
      const DemoReport r = demo_nonreducible();
      std::vector<Json> records;
      for (auto [name, rep] : {std::pair{"odd", &r.odd}, std::pair{"two", &r.two}}) {
        for (auto j : report::to_json(*rep)) {
          j["corpus"] = name;
          records.push_back(std::move(j));
        }
      }
      records.push_back({{"record", "demo"}, {"conforms", r.conforms}, {"as_expected", r.as_expected()}});
      emit(out, common.fmt(), format_demo(r), records);
      return r.as_expected() ? kExitOk : kExitNegative;
    };
  });

  if (!args.empty() && !args.front().starts_with('-')) {
    const auto subs = app.get_subcommands({});
    if (std::none_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == args.front(); })) {
      err << "error: unknown subcommand '" << args.front() << "'\n" << app.help();
      return kExitUsage;
    }
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    return action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace niltame::cli
