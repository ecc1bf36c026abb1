#pragma once

#include <stdexcept>
#include <string>

namespace ergocube {

/// Sizes or arities of the arguments do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data violates a structural invariant. The message names it
/// ("non-commuting", "non-preserving", "bad weights", ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A construction that should always succeed on valid input did not.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The analytic closed forms do not apply to the requested parameters.
class UnsupportedRegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ergocube
