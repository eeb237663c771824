#pragma once

#include <stdexcept>
#include <string>

namespace seqbar {

// Error hierarchy. The CLI maps each kind onto its exit code.

/// Caller passed arguments that break an operation's precondition.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data (files, schemas, weights) failed validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem hypothesis does not hold for the given inputs.
class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(std::string hypothesis, const std::string& detail)
      : std::runtime_error(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

/// Enumeration or complex size exceeded a configured limit.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seqbar
