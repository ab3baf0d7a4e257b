#pragma once

#include <stdexcept>
#include <string>

namespace vmvt {

// Arguments outside an operation's domain (N = 0, nonfinite coefficients,
// exponents that are not distinct, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation was refused because it would exceed an enumeration, memory or
// arc-count budget. The message carries the estimated requirement.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact integer quantity does not fit the representation it must live in.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace vmvt
