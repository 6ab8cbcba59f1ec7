#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace niltame {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A Comp node that is not wrapped in an admissible m^w power.
class SignatureViolation : public Error {
 public:
  using Error::Error;
};

/// An n^(w-1) exponent whose value at some prime is not a free-group word.
class UnsupportedExponent : public Error {
 public:
  using Error::Error;
};

class NotMember : public Error {
 public:
  using Error::Error;
};

class NoDenseSubset : public Error {
 public:
  using Error::Error;
};

/// Construction refused because a size cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace niltame
