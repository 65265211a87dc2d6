#pragma once

#include <stdexcept>
#include <string>

namespace zaremba {

// A computed object failed one of the structural checks it is supposed to
// satisfy. Not a usage error: the CLI reports these with exit status 2.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

// Parameters exceed a configured work or memory budget.
class BudgetExceeded : public std::invalid_argument {
 public:
  explicit BudgetExceeded(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace zaremba
