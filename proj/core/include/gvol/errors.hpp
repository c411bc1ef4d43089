#pragma once

#include <stdexcept>
#include <string>

namespace gvol {

/// Input file problems: missing files, malformed CSV/JSON.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failures: underflowed proposals, failed bracket expansion.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A simulation did not reach its stop level within the step budget.
struct BudgetExceededError : NumericalError {
  explicit BudgetExceededError(const std::string& what)
      : NumericalError(what) {}
};

}  // namespace gvol
