#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyclefactor {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes (validation 2, infeasible size 3, I/O 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural violation of a graph invariant (degree, duplicate edge, index).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : ValidationError("line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class FormatMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BadParameters : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class GraphDisconnected : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class LoopEncountered : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidDistribution : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

class RetryLimitExceeded : public Error {
 public:
  using Error::Error;
};

// Raised by the Markov chain sampler.
class NoPerfectMatchingFound : public Error {
 public:
  using Error::Error;
};

class StepBudgetExhausted : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cyclefactor
