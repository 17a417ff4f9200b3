#pragma once

// Compute kernels for the O(n p^2) paths: the upper-triangular maximum of a
// Gram matrix and the dense cross product used by the Toeplitz sampler.
//
// Each parallel kernel has a serial reference (suffix _reference) kept for
// testing and benchmarking. Parallel results do not depend on the thread
// count: work is split into fixed tiles whose arithmetic order is fixed, and
// tile results are reduced in tile order.

#include <cstddef>
#include <limits>

namespace maxcorr::kernels {

inline constexpr std::size_t kDefaultBlock = 128;
inline constexpr std::size_t kNoLagLimit = std::numeric_limits<std::size_t>::max();

/// Zero-based location of a Gram entry.
struct MaxEntry {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  std::size_t j = 0;
};

/// True if `a` should replace `b` as the running maximum: larger value, or an
/// equal value at a lexicographically smaller (i, j).
inline bool beats(const MaxEntry& a, const MaxEntry& b) noexcept {
  if (a.value != b.value) return a.value > b.value;
  return a.i < b.i || (a.i == b.i && a.j < b.j);
}

struct GramOptions {
  std::size_t block = kDefaultBlock;  // columns per tile, rounded up to a multiple of 8
  int threads = 0;                    // 0: OpenMP default
  std::size_t max_lag = kNoLagLimit;  // only pairs with 1 <= j - i <= max_lag
};

/// max_{i<j} sum_k x[k,i] x[k,j] for a row-major n x p matrix x.
MaxEntry gram_max_upper(const double* x, std::size_t n, std::size_t p,
                        const GramOptions& opts = {});

/// Double-loop reference for gram_max_upper.
MaxEntry gram_max_upper_reference(const double* x, std::size_t n, std::size_t p,
                                  std::size_t max_lag = kNoLagLimit);

/// out[a,b] = sum_m z[a,m] * u[m,b] restricted to m <= b, i.e. out = z * u
/// with u upper triangular. z is n x p, u is p x p, out is n x p; all row-major.
/// With u = L^T this maps i.i.d. normal rows z to rows with covariance L L^T.
void multiply_upper(const double* z, std::size_t n, std::size_t p, const double* u, double* out,
                    std::size_t block = kDefaultBlock, int threads = 0);

void multiply_upper_reference(const double* z, std::size_t n, std::size_t p, const double* u,
                              double* out);

}  // namespace maxcorr::kernels
