#pragma once

#include "maxcorr/error.hpp"
#include "maxcorr/matrix.hpp"

#include <cmath>
#include <cstddef>
#include <optional>

namespace maxcorr::detail {

struct FailedPivot {
  std::size_t index;
  double value;
};

inline void require_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) throw ContractViolation("matrix is not square");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i))
        throw ContractViolation("matrix is not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
}

// Overwrites the lower triangle of `a` with its Cholesky factor and zeroes the
// strict upper triangle. Returns the first pivot <= tol, if any.
inline std::optional<FailedPivot> cholesky_in_place(Matrix& a, double tol) {
  const std::size_t p = a.rows();
  for (std::size_t j = 0; j < p; ++j) {
    double* rj = a.row(j).data();
    double diag = rj[j];
    for (std::size_t m = 0; m < j; ++m) diag -= rj[m] * rj[m];
    if (!(diag > tol)) return FailedPivot{j, diag};
    const double ljj = std::sqrt(diag);
    rj[j] = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double* ri = a.row(i).data();
      double s = ri[j];
      for (std::size_t m = 0; m < j; ++m) s -= ri[m] * rj[m];
      ri[j] = s / ljj;
    }
    for (std::size_t m = j + 1; m < p; ++m) rj[m] = 0.0;
  }
  return std::nullopt;
}

inline double default_pivot_tol(const Matrix& a) {
  double largest = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) largest = std::max(largest, std::abs(a(i, i)));
  return 1e-10 * largest;
}

}  // namespace maxcorr::detail
