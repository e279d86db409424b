#pragma once

#include <stdexcept>
#include <string>

namespace qleak {

// Malformed input: bad dimensions, invariant violations, schema errors.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is well-formed but an operation's precondition does not hold
// (zero-probability outcome, missing implementation, ...).
class PreconditionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative numerical routine exhausted its budget.
class NotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qleak
