#pragma once

#include <stdexcept>

namespace pleig {

/// Input outside the domain of an operation (bad exponent, radii, index, t).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver its result to the requested
/// accuracy. Never thrown for bad input; see DomainError for that.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive step control could not meet the local tolerance.
class IntegrationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The miss function does not change sign across the supplied eigenvalue
/// bracket.
class BracketFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The miss function was observed to decrease in lambda.
class MonotonicityFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pleig
