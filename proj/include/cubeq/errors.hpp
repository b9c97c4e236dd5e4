#pragma once

#include <stdexcept>
#include <string>

namespace cubeq {

// Malformed input: bad form files, dimension mismatches, unsupported moduli.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed its configured work or memory budget. Raised
// instead of returning an approximation.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent routes for the same quantity disagree, or an asserted
// invariant does not hold.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cubeq
