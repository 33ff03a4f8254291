#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sturm {

// Raised when the working precision cannot resolve a computation.
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Covering rules violated after all retries.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded(const std::string& what, std::size_t done) : std::runtime_error(what), enumerated(done) {}
  std::size_t enumerated;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A theorem-level inequality failed numerically.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sturm
