#include "niltame/words.hpp"

#include "niltame/error.hpp"

#include <algorithm>
#include <cctype>

namespace niltame {

Alphabet::Alphabet(std::string_view letters) : letters_(letters) {
  if (letters_.empty()) throw std::invalid_argument("alphabet must be nonempty");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    char c = letters_[i];
    if (c < 'a' || c > 'z') throw std::invalid_argument(std::string("alphabet letter '") + c + "' is not in a-z");
    if (letters_.find(c) != i) throw std::invalid_argument(std::string("duplicate alphabet letter '") + c + "'");
  }
}

std::optional<std::size_t> Alphabet::index_of(char c) const {
  auto pos = letters_.find(c);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

Alphabet Alphabet::formal_variables() const {
  std::string names = letters_;
  for (char c = 'a'; c <= 'z'; ++c) {
    if (names.find(c) == std::string::npos) names.push_back(c);
  }
  return Alphabet(names);
}

Word::Word(std::initializer_list<SignedLetter> raw) : Word(reduce(std::span(raw.begin(), raw.size()))) {}

Word Word::reduce(std::span<const SignedLetter> raw) {
  Word out;
  out.letters_.reserve(raw.size());
  for (const auto& s : raw) {
    if (s.sign != 1 && s.sign != -1) throw std::invalid_argument("signed letter must have sign +1 or -1");
    if (!out.letters_.empty() && out.letters_.back() == s.inverse()) {
      out.letters_.pop_back();
    } else {
      out.letters_.push_back(s);
    }
  }
  return out;
}

Word Word::inverse() const {
  Word out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.letters_.push_back(it->inverse());
  return out;
}

Word Word::pow(const BigInt& z) const {
  if (z == 0 || empty()) return {};
  if (z < 0) return inverse().pow(-z);
  if (z == 1) return *this;
  // w = u c u^{-1} with c cyclically reduced; then w^z = u c^z u^{-1}.
  std::size_t k = 0;
  while (2 * k + 1 < letters_.size() && letters_[k] == letters_[letters_.size() - 1 - k].inverse()) ++k;
  const std::size_t core = letters_.size() - 2 * k;
  if (BigInt(core) * z + 2 * k > kMaxWordLength) {
    throw CapExceeded("word power exceeds the maximum word length");
  }
  const auto times = z.convert_to<std::size_t>();
  Word out;
  out.letters_.reserve(core * times + 2 * k);
  out.letters_.insert(out.letters_.end(), letters_.begin(), letters_.begin() + k);
  for (std::size_t i = 0; i < times; ++i) {
    out.letters_.insert(out.letters_.end(), letters_.begin() + k, letters_.end() - k);
  }
  out.letters_.insert(out.letters_.end(), letters_.end() - k, letters_.end());
  return out;
}

Word operator*(const Word& a, const Word& b) {
  std::size_t cancel = 0;
  while (cancel < a.size() && cancel < b.size() &&
         a.letters_[a.size() - 1 - cancel] == b.letters_[cancel].inverse()) {
    ++cancel;
  }
  if (a.size() + b.size() - 2 * cancel > kMaxWordLength) {
    throw CapExceeded("product exceeds the maximum word length");
  }
  Word out;
  out.letters_.reserve(a.size() + b.size() - 2 * cancel);
  out.letters_.insert(out.letters_.end(), a.letters_.begin(), a.letters_.end() - cancel);
  out.letters_.insert(out.letters_.end(), b.letters_.begin() + cancel, b.letters_.end());
  return out;
}

std::string Word::to_string(const Alphabet& alphabet) const {
  if (empty()) return "1";
  std::string out;
  out.reserve(size());
  for (const auto& s : letters_) {
    char c = alphabet.letter(s.index);
    out.push_back(s.sign > 0 ? c : static_cast<char>(std::toupper(c)));
  }
  return out;
}

Word free_reduce(std::span<const SignedLetter> raw) { return Word::reduce(raw); }

Word parse_word(std::string_view text, const Alphabet& alphabet) {
  std::vector<SignedLetter> raw;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_space();
  if (i < text.size() && text[i] == '1') {
    ++i;
    skip_space();
    if (i != text.size()) throw ParseError("unexpected input after identity word", i);
    return {};
  }
  if (i == text.size()) throw ParseError("empty word", i);
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) throw ParseError(std::string("unexpected character '") + c + "'", i);
    const bool inverse = std::isupper(static_cast<unsigned char>(c));
    auto index = alphabet.index_of(static_cast<char>(std::tolower(c)));
    if (!index) throw ParseError(std::string("unknown letter '") + c + "'", i);
    const std::size_t at = i++;
    std::size_t reps = 1;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      reps = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        reps = reps * 10 + static_cast<std::size_t>(text[i++] - '0');
        if (reps > kMaxWordLength) throw ParseError("exponent too large", at);
      }
    }
    raw.insert(raw.end(), reps, SignedLetter{*index, inverse ? -1 : 1});
    if (raw.size() > kMaxWordLength) throw ParseError("word too long", at);
  }
  return Word::reduce(raw);
}

std::vector<Word> parse_word_list(std::string_view text, const Alphabet& alphabet) {
  std::vector<Word> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    try {
      out.push_back(parse_word(piece, alphabet));
    } catch (const ParseError& e) {
      throw ParseError(std::string("in word list: ") + e.what(), start + e.position());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

long long exponent_sum(const Word& w, std::size_t index) {
  long long sum = 0;
  for (const auto& s : w.letters()) {
    if (s.index == index) sum += s.sign;
  }
  return sum;
}

}  // namespace niltame
