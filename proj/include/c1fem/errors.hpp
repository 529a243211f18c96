#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace c1fem {

/// Raised when an operation is called with arguments outside its contract.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Exact zero pivot encountered during a dense factorization.
class SingularMatrixError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Cholesky breakdown or iterative-solver non-convergence.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A pointwise integrand returned a non-finite value.
class NonFiniteError : public std::runtime_error {
public:
  NonFiniteError(const std::string& what, double x, double y)
      : std::runtime_error(what), x_(x), y_(y) {}
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

private:
  double x_;
  double y_;
};

/// The DOF matrix of an element is numerically singular.
///
/// Carries the condition estimate and the bubble set that was tried so that
/// callers can report or fall back to an alternative enrichment.
class UnisolvenceError : public std::runtime_error {
public:
  UnisolvenceError(const std::string& what, double cond, std::vector<int> bubbles)
      : std::runtime_error(what), cond_(cond), bubbles_(std::move(bubbles)) {}
  double condition() const noexcept { return cond_; }
  const std::vector<int>& bubbles() const noexcept { return bubbles_; }

private:
  double cond_;
  std::vector<int> bubbles_;
};

} // namespace c1fem
