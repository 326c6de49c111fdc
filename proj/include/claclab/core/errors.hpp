#pragma once

#include <stdexcept>
#include <string>

namespace claclab {

// Shape mismatch, malformed spec, bad coefficient.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called on an object that is not ready for it (empty buffer,
// uninitialized marginal estimate).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Caller broke an interface contract (stepping a finished episode).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A loss or parameter became NaN/Inf during training.
class TrainingDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration document. `field` is the dotted path when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace claclab
