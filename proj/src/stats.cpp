#include "maxcorr/stats.hpp"

#include "maxcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace maxcorr {
namespace {

void require_input(const Matrix& x) {
  if (x.rows() < 1 || x.cols() < 2)
    throw ValidationError("need at least one row and two columns");
  for (double v : x.values())
    if (!std::isfinite(v)) throw ValidationError("non-finite entry in data matrix");
}

// Columns scaled to unit Euclidean norm, optionally after centering.
Matrix normalized_columns(const Matrix& x, CorrelationKind kind) {
  require_input(x);
  const std::size_t n = x.rows(), p = x.cols();
  Matrix y = x;
  if (kind == CorrelationKind::kCentered) {
    std::vector<double> mean(p, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto row = x.row(k);
      for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
    }
    for (double& m : mean) m /= static_cast<double>(n);
    for (std::size_t j = 0; j < p; ++j) {
      bool constant = true;
      for (std::size_t k = 1; k < n && constant; ++k) constant = x(k, j) == x(0, j);
      if (constant) throw DegenerateColumn(j + 1);
    }
    for (std::size_t k = 0; k < n; ++k) {
      auto row = y.row(k);
      for (std::size_t j = 0; j < p; ++j) row[j] -= mean[j];
    }
  }
  std::vector<double> ss(p, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = y.row(k);
    for (std::size_t j = 0; j < p; ++j) ss[j] += row[j] * row[j];
  }
  std::vector<double> inv(p);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(ss[j] > 0.0)) throw DegenerateColumn(j + 1);
    inv[j] = 1.0 / std::sqrt(ss[j]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    auto row = y.row(k);
    for (std::size_t j = 0; j < p; ++j) row[j] *= inv[j];
  }
  return y;
}

ExtremeStat extreme(const Matrix& x, CorrelationKind kind, std::size_t max_lag,
                    const StatOptions& opts) {
  const Matrix y = normalized_columns(x, kind);
  const auto best = kernels::gram_max_upper(y.data(), y.rows(), y.cols(),
                                            {opts.block, opts.threads, max_lag});
  // Rounding can push a perfect correlation a few ulps past 1.
  const double value = std::clamp(best.value, -1.0, 1.0);
  return {value, best.i + 1, best.j + 1, kind, x.rows(), x.cols()};
}

double log_p_checked(double p) {
  if (!(p > std::numbers::e)) throw DomainError("p must exceed e, got " + std::to_string(p));
  return std::log(p);
}

double gumbel_normalize(double z, double lp) {
  const double s = std::sqrt(2.0 * lp);
  return s * (z - s + (std::log(lp) + std::log(4.0 * std::numbers::pi)) / (2.0 * s));
}

}  // namespace

std::string_view to_string(CorrelationKind kind) {
  return kind == CorrelationKind::kCentered ? "centered" : "uncentered";
}

ExtremeStat max_corr_uncentered(const Matrix& x, const StatOptions& opts) {
  return extreme(x, CorrelationKind::kUncentered, kernels::kNoLagLimit, opts);
}

ExtremeStat max_corr_centered(const Matrix& x, const StatOptions& opts) {
  return extreme(x, CorrelationKind::kCentered, kernels::kNoLagLimit, opts);
}

ExtremeStat banded_max_corr(const Matrix& x, std::size_t band, CorrelationKind kind,
                            const StatOptions& opts) {
  if (band < 1 || band + 1 > x.cols())
    throw ValidationError("band must lie in [1, p-1], got " + std::to_string(band));
  return extreme(x, kind, band, opts);
}

double w_statistic(double Ln, double n, double p, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw ValidationError("r must lie in [0,1)");
  const double lp = log_p_checked(p);
  const double rn = std::sqrt(n);
  return gumbel_normalize((rn * Ln - r * rn) / (1.0 - r * r), lp);
}

double w_star(std::size_t p, const StreamSeed& seed) {
  if (p < 3) throw ValidationError("w_star needs p >= 3");
  const double lp = log_p_checked(static_cast<double>(p));
  std::vector<double> z(p);
  fill_normal_row(seed, StreamTag::kMaxima, 0, z);
  return gumbel_normalize(*std::max_element(z.begin(), z.end()), lp);
}

double max_angle(const ExtremeStat& stat) {
  if (!(std::abs(stat.value) <= 1.0)) throw ValidationError("correlation outside [-1,1]");
  return std::acos(stat.value);
}

}  // namespace maxcorr
