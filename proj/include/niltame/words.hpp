#pragma once

#include "niltame/arith.hpp"

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace niltame {

/// Ordered list of distinct lowercase letters a_1, ..., a_k.
class Alphabet {
 public:
  explicit Alphabet(std::string_view letters);

  std::size_t size() const noexcept { return letters_.size(); }
  char letter(std::size_t index) const { return letters_.at(index); }
  std::optional<std::size_t> index_of(char c) const;
  const std::string& letters() const noexcept { return letters_; }

  /// Names for the formal variables x_1, x_2, ... of an operator: the
  /// alphabet's own letters first, then the remaining lowercase letters in
  /// a..z order. Always 26 letters long.
  Alphabet formal_variables() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string letters_;
};

struct SignedLetter {
  std::size_t index = 0;
  int sign = 1;  // +1 or -1

  SignedLetter inverse() const { return {index, -sign}; }
  friend auto operator<=>(const SignedLetter&, const SignedLetter&) = default;
};

/// Longest word any operation is allowed to produce.
inline constexpr std::size_t kMaxWordLength = std::size_t{1} << 24;

/// A freely reduced word: the canonical form of an element of the free group.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<SignedLetter> raw);

  /// Free reduction of an arbitrary sequence.
  static Word reduce(std::span<const SignedLetter> raw);
  static Word letter(std::size_t index, int sign = 1) { return Word{{index, sign}}; }

  std::span<const SignedLetter> letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  Word inverse() const;
  /// w^z for any integer z. Throws CapExceeded past kMaxWordLength.
  Word pow(const BigInt& z) const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

  /// Lowercase for positive letters, uppercase for inverses, "1" for empty.
  std::string to_string(const Alphabet& alphabet) const;

 private:
  std::vector<SignedLetter> letters_;
};

Word free_reduce(std::span<const SignedLetter> raw);
inline Word invert(const Word& w) { return w.inverse(); }

/// Parses "abA", "a2B3", or "1". A letter may be followed by a decimal
/// exponent; uppercase letters denote inverses.
Word parse_word(std::string_view text, const Alphabet& alphabet);

/// Comma separated list of words, e.g. "a2,abA".
std::vector<Word> parse_word_list(std::string_view text, const Alphabet& alphabet);

/// Exponent sum of letter `index` in `w`.
long long exponent_sum(const Word& w, std::size_t index);

}  // namespace niltame
