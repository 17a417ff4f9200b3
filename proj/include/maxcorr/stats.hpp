#pragma once

// Largest off-diagonal sample correlation and its normalizations.

#include "maxcorr/kernels.hpp"
#include "maxcorr/matrix.hpp"
#include "maxcorr/rng.hpp"

#include <cstddef>
#include <string_view>

namespace maxcorr {

enum class CorrelationKind {
  kUncentered,  // sum x_i x_j / (|x_i| |x_j|)
  kCentered,    // Pearson
};

std::string_view to_string(CorrelationKind kind);

struct ExtremeStat {
  double value = 0.0;
  std::size_t i = 0;  // 1-based, i < j
  std::size_t j = 0;
  CorrelationKind kind = CorrelationKind::kUncentered;
  std::size_t n = 0;
  std::size_t p = 0;
};

/// Gram kernel tuning; results do not depend on it beyond rounding.
struct StatOptions {
  std::size_t block = kernels::kDefaultBlock;
  int threads = 0;
};

/// Columns of `x` are observations' coordinates: x is n x p. Accepts any
/// n >= 1, p >= 2 with finite entries. Throws DegenerateColumn (1-based) for a
/// zero-norm column.
ExtremeStat max_corr_uncentered(const Matrix& x, const StatOptions& opts = {});

/// As above after centering each column. Throws DegenerateColumn for a
/// constant column.
ExtremeStat max_corr_centered(const Matrix& x, const StatOptions& opts = {});

/// Maximum over pairs with 1 <= j - i <= band. Shares the tile arithmetic of
/// the unrestricted kernel, so band = p - 1 reproduces it bit for bit.
ExtremeStat banded_max_corr(const Matrix& x, std::size_t band,
                            CorrelationKind kind = CorrelationKind::kUncentered,
                            const StatOptions& opts = {});

/// sqrt(2 log p) [ (sqrt(n) L - r sqrt(n)) / (1 - r^2) - sqrt(2 log p)
///                 + (log log p + log 4 pi) / (2 sqrt(2 log p)) ].
/// Throws DomainError for p <= e.
double w_statistic(double Ln, double n, double p, double r);

/// The same normalization applied to the maximum of p i.i.d. standard normals
/// drawn from `seed` (maxima stream).
double w_star(std::size_t p, const StreamSeed& seed);

/// Smallest pairwise angle arccos(value), in radians.
double max_angle(const ExtremeStat& stat);

}  // namespace maxcorr
