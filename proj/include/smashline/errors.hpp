#pragma once

#include <stdexcept>
#include <string>

namespace smashline {

// Precondition / configuration violation. The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A product would exceed the configured x-degree cap. The cap must be raised
// explicitly; moments have to be exact, so silent truncation is not an option.
class XCapOverflow : public ValidationError {
 public:
  XCapOverflow(int needed, int cap)
      : ValidationError("x-degree " + std::to_string(needed) +
                        " exceeds x_cap " + std::to_string(cap) +
                        "; raise x_cap for this computation") {}
};

// Brute-force enumeration guard tripped (inputs too large to expand).
class EnumerationGuard : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical blow-up or boundary-mass violation in a PDE solve. Exit code 4.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hard verification invariant failed. Exit code 3.
class InvariantFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smashline
