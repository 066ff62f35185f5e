#pragma once

#include <stdexcept>
#include <string>

namespace orbicount {

// Precondition violated by a caller-supplied argument.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Estimated work exceeds the configured operations ceiling.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double estimate, double budget)
      : std::runtime_error(what), estimate_(estimate), budget_(budget) {}
  double estimate() const { return estimate_; }
  double budget() const { return budget_; }

 private:
  double estimate_;
  double budget_;
};

// A numerical or combinatorial self-check failed (e.g. a residual imaginary
// part that must vanish).
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orbicount
