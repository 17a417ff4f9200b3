#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxcorr {

// Bad model parameters or malformed user input.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A caller broke a documented precondition (e.g. a non-symmetric matrix).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(std::size_t pivot_index, double pivot)
      : std::runtime_error("covariance not positive definite: pivot " +
                           std::to_string(pivot_index) + " = " + std::to_string(pivot)),
        pivot_index_(pivot_index),
        pivot_(pivot) {}

  std::size_t pivot_index() const noexcept { return pivot_index_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_index_;
  double pivot_;
};

// Data for which a correlation statistic is undefined: zero-norm or constant
// columns, or |r_hat| >= 1 in the AR(1) structure test.
class DegenerateData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateColumn : public DegenerateData {
 public:
  explicit DegenerateColumn(std::size_t column)
      : DegenerateData("degenerate column " + std::to_string(column)), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace maxcorr
