#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fostab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: empty sequences, out-of-range orders, bad dimensions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Well-formed input outside the mathematical domain an operation supports.
class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Text that does not match the grammar. Carries the byte offset of the
/// offending character.
class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t offset, const std::string& expected)
      : InvalidInput("parse error at offset " + std::to_string(offset) + ": expected " + expected),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Iterative method failed: non-convergence, loss of precision.
class NumericError : public Error {
 public:
  using Error::Error;
};

class PrecisionLoss : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace fostab
