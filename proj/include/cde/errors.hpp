#pragma once

#include <stdexcept>
#include <string>

namespace cde {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input: dimension mismatch, malformed spec, unknown name.
struct ArgumentError : Error {
  using Error::Error;
};

// Input is well formed but violates an operation's precondition.
struct PreconditionError : Error {
  using Error::Error;
};

// Outside the domain where a closed form applies (e.g. no finite jump).
struct DomainError : Error {
  using Error::Error;
};

// Step-size underflow, root finder failure, non-convergence.
struct NumericalError : Error {
  using Error::Error;
};

// Caller broke an internal contract (e.g. bracket without sign change).
struct ContractError : Error {
  using Error::Error;
};

}  // namespace cde
