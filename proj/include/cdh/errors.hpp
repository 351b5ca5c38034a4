#pragma once

#include <stdexcept>
#include <string>

namespace cdh {

/// Argument violates an operation's precondition (ordering, membership, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation at a pole of the Gamma function.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters outside the region where a quantity is defined
/// (non-positive norm factor, non-positive-definite recurrence, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical limit did not settle within the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampling requested from a measure that is not a probability measure.
class NotNormalized : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cdh
