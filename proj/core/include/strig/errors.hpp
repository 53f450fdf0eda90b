#pragma once

#include <stdexcept>

namespace strig {

/// A greedy step selected a column that is numerically dependent on the
/// already-selected ones. Runs abort rather than regularize silently.
class DegenerateColumnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// F_X F_X^* (or a support Gram) is numerically singular.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Equality constraints have no solution (real-mode preprocessing).
class InfeasibleProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strig
