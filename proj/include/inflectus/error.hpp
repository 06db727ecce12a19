#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace inflectus {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Root finding, continuation or tracing could not reach its tolerance.
class NumericFailure : public Error {
public:
  using Error::Error;
};

/// The input is valid syntax but mathematically degenerate for the request
/// (constant R, identically vanishing F_R, zero denominator, ...).
class DegenerateInput : public Error {
public:
  using Error::Error;
};

/// A precondition of an operation is violated (non-exact f for a primitive,
/// wrong degree for a classifier, degree cap exceeded, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Evaluation requested at or too close to a pole.
class PoleProximity : public DomainError {
public:
  using DomainError::DomainError;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset, std::vector<std::string> expected = {})
      : Error(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

} // namespace inflectus
