#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gt {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An argument is outside an operation's domain.
struct DomainError : Error {
  using Error::Error;
};

/// A code parameter tuple is malformed or cannot carry the requested code.
struct ParamError : Error {
  using Error::Error;
};

/// Exact-power optimization found no feasible family for the given t.
struct ModeError : Error {
  using Error::Error;
};

/// Test outcomes contradict the promised defect bound: the oracle lied or
/// the instance has more defects than the strategy was told to expect.
struct InconsistentOutcomeError : Error {
  using Error::Error;
};

/// A strategy broke the stage discipline of a session.
struct ProtocolViolationError : Error {
  using Error::Error;
};

/// An exhaustive sweep would exceed the configured case budget.
struct BudgetExceededError : Error {
  BudgetExceededError(const std::string& msg, std::uint64_t required)
      : Error(msg), required_cases(required) {}
  std::uint64_t required_cases;  // saturated at uint64 max
};

}  // namespace gt
