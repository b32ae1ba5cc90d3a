#pragma once

#include <stdexcept>
#include <string>

namespace cubicvd {

// Input outside an operation's precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds a configured table or sieve limit.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Mathematical failure: pole, branch cut, empty window, extrapolation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cubicvd
