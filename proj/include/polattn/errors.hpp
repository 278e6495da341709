#pragma once

#include <stdexcept>
#include <string>

namespace polattn {

// Bad input: malformed scenario, out-of-range parameter, broken invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite intermediate or a solver that failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Missing entry in a tabulated function.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Posterior conditioned on a signal of zero marginal probability.
class UndefinedPosteriorError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace polattn
