#pragma once

#include <stdexcept>
#include <string>

namespace bushy {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. The CLI maps this to exit code 2.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition or domain violation. The CLI maps this to exit code 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when a case split that a combinatorial lemma rules out actually
/// occurs. Seeing one means a bug, not bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace bushy
