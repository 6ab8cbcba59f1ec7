#include "niltame/terms.hpp"

#include "niltame/abelian.hpp"
#include "niltame/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace niltame {

struct Term::Node {
  Kind kind = Kind::Identity;
  std::size_t index = 0;  // letter index or Comp component
  Exponent exponent;
  std::vector<Term> kappa;
  std::vector<Term> children;  // Product: {left, right}; Power: {base}; Comp: args
};

Exponent Exponent::power_omega(BigInt n) {
  if (n < 1) throw std::invalid_argument("n^w requires n >= 1");
  return {Kind::PowerOmega, std::move(n)};
}

Exponent Exponent::power_omega_minus_one(BigInt n) {
  if (n < 1) throw std::invalid_argument("n^(w-1) requires n >= 1");
  return {Kind::PowerOmegaMinusOne, std::move(n)};
}

Term::Term() {
  static const auto identity_node = std::make_shared<const Node>();
  node_ = identity_node;
}
Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Term Term::letter(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Letter;
  n->index = index;
  return Term(std::move(n));
}

Term Term::product(Term left, Term right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->children = {std::move(left), std::move(right)};
  return Term(std::move(n));
}

Term Term::power(Term base, Exponent exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->exponent = std::move(exponent);
  n->children = {std::move(base)};
  return Term(std::move(n));
}

Term Term::comp(std::size_t component, std::vector<Term> kappa, std::vector<Term> args) {
  if (kappa.empty()) throw std::invalid_argument("Comp needs at least one kappa word");
  if (kappa.size() != args.size()) throw std::invalid_argument("Comp arity mismatch between kappa words and arguments");
  if (component >= kappa.size()) throw std::invalid_argument("Comp component out of range");
  for (const auto& k : kappa) {
    if (!k.is_kappa()) throw std::invalid_argument("Comp kappa word is not a kappa-term");
    if (k.letter_bound() > kappa.size()) throw std::invalid_argument("Comp kappa word uses a variable beyond the arity");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Comp;
  n->index = component;
  n->kappa = std::move(kappa);
  n->children = std::move(args);
  return Term(std::move(n));
}

Term Term::product_of(const std::vector<Term>& factors) {
  if (factors.empty()) return identity();
  Term acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = product(acc, factors[i]);
  return acc;
}

Term::Kind Term::kind() const noexcept { return node_->kind; }

std::size_t Term::letter_index() const {
  if (kind() != Kind::Letter) throw std::logic_error("letter_index on a non-letter");
  return node_->index;
}
const Term& Term::left() const {
  if (kind() != Kind::Product) throw std::logic_error("left on a non-product");
  return node_->children[0];
}
const Term& Term::right() const {
  if (kind() != Kind::Product) throw std::logic_error("right on a non-product");
  return node_->children[1];
}
const Term& Term::base() const {
  if (kind() != Kind::Power) throw std::logic_error("base on a non-power");
  return node_->children[0];
}
const Exponent& Term::exponent() const {
  if (kind() != Kind::Power) throw std::logic_error("exponent on a non-power");
  return node_->exponent;
}
std::size_t Term::component() const {
  if (kind() != Kind::Comp) throw std::logic_error("component on a non-Comp");
  return node_->index;
}
std::size_t Term::arity() const {
  if (kind() != Kind::Comp) throw std::logic_error("arity on a non-Comp");
  return node_->kappa.size();
}
const std::vector<Term>& Term::kappa() const {
  if (kind() != Kind::Comp) throw std::logic_error("kappa on a non-Comp");
  return node_->kappa;
}
const std::vector<Term>& Term::args() const {
  if (kind() != Kind::Comp) throw std::logic_error("args on a non-Comp");
  return node_->children;
}

bool Term::is_kappa() const {
  switch (kind()) {
    case Kind::Letter:
    case Kind::Identity: return true;
    case Kind::Product: return left().is_kappa() && right().is_kappa();
    case Kind::Power:
      return (exponent().kind == Exponent::Kind::Integer || exponent().kind == Exponent::Kind::OmegaMinusOne) &&
             base().is_kappa();
    case Kind::Comp: return false;
  }
  return false;
}

std::size_t Term::letter_bound() const {
  switch (kind()) {
    case Kind::Letter: return letter_index() + 1;
    case Kind::Identity: return 0;
    case Kind::Product: return std::max(left().letter_bound(), right().letter_bound());
    case Kind::Power: return base().letter_bound();
    case Kind::Comp: {
      std::size_t bound = 0;
      for (const auto& a : args()) bound = std::max(bound, a.letter_bound());
      return bound;
    }
  }
  return 0;
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const auto& k : node_->kappa) d = std::max(d, k.depth());
  for (const auto& c : node_->children) d = std::max(d, c.depth());
  return d + 1;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.index == y.index && x.exponent == y.exponent && x.kappa == y.kappa &&
         x.children == y.children;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

  Term parse_all() {
    Term t = parse_product(alphabet_);
    skip();
    if (pos_ != text_.size()) fail("unexpected input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool peek_digit() {
    skip();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  BigInt parse_int() {
    if (!peek_digit()) fail("expected an integer");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  Term parse_product(const Alphabet& letters) {
    Term t = parse_power(letters);
    while (accept('*')) t = Term::product(t, parse_power(letters));
    return t;
  }

  Term parse_power(const Alphabet& letters) {
    Term t = parse_atom(letters);
    while (accept('^')) t = Term::power(t, parse_exponent());
    return t;
  }

  Exponent parse_exponent() {
    if (peek_digit()) return Exponent::integer(parse_int());
    if (accept('-')) return Exponent::integer(-parse_int());
    const std::size_t open = pos_;
    expect('(');
    if (accept('w')) {
      expect('-');
      if (parse_int() != 1) fail("expected 'w-1'");
      expect(')');
      return Exponent::omega_minus_one();
    }
    BigInt n = parse_int();
    if (n < 1) {
      pos_ = open;
      fail("base of an n^w exponent must be >= 1");
    }
    expect('^');
    if (accept('(')) {
      expect('w');
      expect('-');
      if (parse_int() != 1) fail("expected 'w-1'");
      expect(')');
      expect(')');
      return Exponent::power_omega_minus_one(std::move(n));
    }
    expect('w');
    expect(')');
    return Exponent::power_omega(std::move(n));
  }

  Term parse_atom(const Alphabet& letters) {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '1') {
      ++pos_;
      if (peek_digit()) fail("integer is not a term");
      return Term::identity();
    }
    if (c == '(') {
      ++pos_;
      Term t = parse_product(letters);
      expect(')');
      return t;
    }
    if (c == 'C') return parse_comp(letters);
    if (c >= 'a' && c <= 'z') {
      auto index = letters.index_of(c);
      if (!index) fail(std::string("unknown letter '") + c + "'");
      ++pos_;
      return Term::letter(*index);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Term parse_comp(const Alphabet& letters) {
    const std::size_t start = pos_;
    ++pos_;  // 'C'
    expect('[');
    BigInt j = parse_int();
    expect(';');
    const Alphabet formal = letters.formal_variables();
    std::vector<Term> kappa;
    std::vector<std::size_t> kappa_pos;
    do {
      skip();
      kappa_pos.push_back(pos_);
      kappa.push_back(parse_product(formal));
    } while (accept(','));
    expect(']');
    expect('(');
    std::vector<Term> args;
    do {
      args.push_back(parse_product(letters));
    } while (accept(','));
    expect(')');
    const std::size_t n = kappa.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!kappa[i].is_kappa()) {
        pos_ = kappa_pos[i];
        fail("operator word is not a kappa-term");
      }
      if (kappa[i].letter_bound() > n) {
        pos_ = kappa_pos[i];
        fail("operator word uses a variable beyond the arity " + std::to_string(n));
      }
    }
    if (args.size() != n) {
      pos_ = start;
      fail("Comp arity mismatch: " + std::to_string(n) + " operator words but " + std::to_string(args.size()) +
           " arguments");
    }
    if (j < 1 || j > n) {
      pos_ = start;
      fail("Comp component out of range 1.." + std::to_string(n));
    }
    return Term::comp(j.convert_to<std::size_t>() - 1, std::move(kappa), std::move(args));
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

void print_exponent(std::ostream& os, const Exponent& e) {
  switch (e.kind) {
    case Exponent::Kind::Integer: os << e.value; break;
    case Exponent::Kind::OmegaMinusOne: os << "(w-1)"; break;
    case Exponent::Kind::PowerOmega: os << '(' << e.value << "^w)"; break;
    case Exponent::Kind::PowerOmegaMinusOne: os << '(' << e.value << "^(w-1))"; break;
  }
}

void print_into(std::ostream& os, const Term& t, const Alphabet& letters) {
  switch (t.kind()) {
    case Term::Kind::Letter: os << letters.letter(t.letter_index()); break;
    case Term::Kind::Identity: os << '1'; break;
    case Term::Kind::Product: {
      print_into(os, t.left(), letters);
      os << '*';
      const bool wrap = t.right().kind() == Term::Kind::Product;
      if (wrap) os << '(';
      print_into(os, t.right(), letters);
      if (wrap) os << ')';
      break;
    }
    case Term::Kind::Power: {
      const bool wrap = t.base().kind() == Term::Kind::Product || t.base().kind() == Term::Kind::Power;
      if (wrap) os << '(';
      print_into(os, t.base(), letters);
      if (wrap) os << ')';
      os << '^';
      print_exponent(os, t.exponent());
      break;
    }
    case Term::Kind::Comp: {
      const Alphabet formal = letters.formal_variables();
      os << "C[" << t.component() + 1 << ';';
      for (std::size_t i = 0; i < t.arity(); ++i) {
        os << (i ? ", " : " ");
        print_into(os, t.kappa()[i], formal);
      }
      os << "](";
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ", ";
        print_into(os, t.args()[i], letters);
      }
      os << ')';
      break;
    }
  }
}

}  // namespace

Term parse_term(std::string_view text, const Alphabet& alphabet) { return Parser(text, alphabet).parse_all(); }

std::string print_term(const Term& term, const Alphabet& alphabet) {
  if (term.letter_bound() > alphabet.size()) throw std::invalid_argument("term uses letters outside the alphabet");
  std::ostringstream os;
  print_into(os, term, alphabet);
  return os.str();
}

Term word_to_term(const Word& w) {
  std::vector<Term> factors;
  auto letters = w.letters();
  for (std::size_t i = 0; i < letters.size();) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    const long long run = static_cast<long long>(j - i) * letters[i].sign;
    Term l = Term::letter(letters[i].index);
    factors.push_back(run == 1 ? l : Term::power(l, Exponent::integer(run)));
    i = j;
  }
  return Term::product_of(factors);
}

Word kappa_to_word(const Term& kappa) {
  switch (kappa.kind()) {
    case Term::Kind::Letter: return Word::letter(kappa.letter_index());
    case Term::Kind::Identity: return {};
    case Term::Kind::Product: return kappa_to_word(kappa.left()) * kappa_to_word(kappa.right());
    case Term::Kind::Power:
      if (kappa.exponent().kind == Exponent::Kind::Integer) return kappa_to_word(kappa.base()).pow(kappa.exponent().value);
      if (kappa.exponent().kind == Exponent::Kind::OmegaMinusOne) return kappa_to_word(kappa.base()).inverse();
      break;
    case Term::Kind::Comp: break;
  }
  throw SignatureViolation("not a kappa-term");
}

Term substitute(const Term& term, const std::vector<Term>& images) {
  switch (term.kind()) {
    case Term::Kind::Letter:
      if (term.letter_index() >= images.size()) throw std::invalid_argument("substitute: no image for letter");
      return images[term.letter_index()];
    case Term::Kind::Identity: return term;
    case Term::Kind::Product: return Term::product(substitute(term.left(), images), substitute(term.right(), images));
    case Term::Kind::Power: return Term::power(substitute(term.base(), images), term.exponent());
    case Term::Kind::Comp: {
      std::vector<Term> args;
      for (const auto& a : term.args()) args.push_back(substitute(a, images));
      return Term::comp(term.component(), term.kappa(), std::move(args));
    }
  }
  return term;
}

// ---------------------------------------------------------------------------
// Signature validation

namespace {

std::string offending_prime(const BigInt& det, const BigInt& m) {
  BigInt d = det < 0 ? BigInt(-det) : det;
  for (BigInt g = gcd(d, m); g > 1; g = gcd(d, m)) d /= g;
  if (d < BigInt(1'000'000'000'000LL)) return "prime " + prime_divisors(d).front().str();
  return "a prime";
}

void visit(const Term& t, const std::string& path, const std::optional<BigInt>& wrapper, SignatureReport& report) {
  switch (t.kind()) {
    case Term::Kind::Letter:
    case Term::Kind::Identity: return;
    case Term::Kind::Product:
      visit(t.left(), path + ".left", std::nullopt, report);
      visit(t.right(), path + ".right", std::nullopt, report);
      return;
    case Term::Kind::Power: {
      const Exponent& e = t.exponent();
      if (e.kind == Exponent::Kind::PowerOmega) {
        visit(t.base(), path + ".base", e.value, report);
      } else if (e.kind == Exponent::Kind::OmegaMinusOne) {
        visit(t.base(), path + ".base", wrapper, report);
      } else {
        visit(t.base(), path + ".base", std::nullopt, report);
      }
      return;
    }
    case Term::Kind::Comp: {
      CompRecord rec;
      rec.path = path;
      rec.wrapper = wrapper;
      rec.determinant = det(operator_matrix(t.kappa()));
      if (!wrapper) {
        rec.reason = "operator component is not wrapped in an m^w power";
      } else if (*rec.determinant == 0) {
        rec.reason = "exponent matrix is singular (det = 0)";
      } else if (!divides_only(*rec.determinant, *wrapper)) {
        rec.reason = offending_prime(*rec.determinant, *wrapper) + " divides det = " + rec.determinant->str() +
                     " but not m = " + wrapper->str();
      }
      rec.valid = rec.reason.empty();
      report.valid = report.valid && rec.valid;
      report.comps.push_back(rec);
      for (std::size_t i = 0; i < t.arity(); ++i) {
        visit(t.args()[i], path + ".args[" + std::to_string(i) + "]", std::nullopt, report);
      }
      return;
    }
  }
}

}  // namespace

SignatureReport validate_sigma(const Term& term) {
  SignatureReport report;
  visit(term, "root", std::nullopt, report);
  return report;
}

}  // namespace niltame
