#pragma once

#include <stdexcept>
#include <string>

namespace linsys {

/// Malformed or inconsistent user input (bad file, invalid graph, non-effective divisor).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition of a library routine.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An internal consistency check failed. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The alternating cell count of a computed complex is not 1.
class EulerViolation : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

}  // namespace linsys
