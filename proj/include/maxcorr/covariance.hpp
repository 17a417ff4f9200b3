#pragma once

// AR(1) and Toeplitz covariance models and the closed-form second-moment
// identities for the linearized correlation statistics.

#include "maxcorr/matrix.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace maxcorr {

/// Table r_0 = 1, r_1, ..., r_{h-1} of a non-increasing, non-negative
/// correlation sequence. Construction validates the table and reports the
/// first offending lag.
class ToeplitzSequence {
 public:
  explicit ToeplitzSequence(std::vector<double> values);

  /// Evaluates `r(k)` for k = 1..horizon-1; r_0 is fixed to 1.
  static ToeplitzSequence from_function(const std::function<double(std::size_t)>& r,
                                        std::size_t horizon);
  /// r_k = r^k.
  static ToeplitzSequence geometric(double r, std::size_t horizon);
  /// r_k = a * (log(A + k))^(-1/2 + eps) for k >= 1.
  static ToeplitzSequence logpow(double a, double A, double eps, std::size_t horizon);

  double operator[](std::size_t k) const;
  std::size_t horizon() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

struct Ar1Model {
  double r = 0.0;
};

struct ToeplitzModel {
  ToeplitzSequence seq;
};

using CovarianceModel = std::variant<Ar1Model, ToeplitzModel>;

/// Throws ValidationError if the model cannot produce a p x p matrix.
void validate_model(const CovarianceModel& model, std::size_t p);

/// Lag-k correlation of the model.
double model_correlation(const CovarianceModel& model, std::size_t lag);

Matrix build_matrix(const CovarianceModel& model, std::size_t p);

struct PdReport {
  bool passed = false;
  std::size_t pivot_index = 0;  // first offending pivot when !passed
  double pivot = 0.0;
  std::string diagnostic;
};

/// Cholesky-based positive-definiteness check. Default tolerance is
/// 1e-10 times the largest diagonal entry.
PdReport validate_pd(const Matrix& m, std::optional<double> tol = std::nullopt);

enum class PolyaVerdict { kPass, kInconclusive };

struct PolyaReport {
  PolyaVerdict verdict = PolyaVerdict::kInconclusive;
  std::size_t offending_lag = 0;
};

/// Sufficient check for positive definiteness: r non-increasing, convex and
/// non-negative on 0..p. Needs r_0..r_p.
PolyaReport polya_check(const ToeplitzSequence& seq, std::size_t p);

struct GapIndex {
  std::size_t d = 1;
};

inline constexpr std::size_t kDefaultGapHorizon = 10'000;

/// Smallest d >= 1 with r_d > r_{d+1}.
GapIndex gap_index(const ToeplitzSequence& seq, std::size_t horizon = kDefaultGapHorizon);

/// Var of S(i,j) = x_i x_j - r^lag (x_i^2 + x_j^2) / 2 under AR(1).
double s_var(double r, std::size_t lag);

/// E[S(i,i+1) S(j,j+1)] under AR(1), k = j - i >= 1.
double s_cov_adjacent(double r, std::size_t k);

/// Limiting covariance f(k) of adjacent linearized statistics k apart.
double f_seq(const ToeplitzSequence& seq, std::size_t k);

/// E[Q_{i,i+s} Q_{j,j+t}] by Wick expansion on the joint normal of
/// (x_i, x_{i+s}, x_j, x_{j+t}). Indices are 1-based; 1 <= s,t <= d.
double q_cov(const ToeplitzSequence& seq, GapIndex d, std::size_t i, std::size_t s,
             std::size_t j, std::size_t t);

struct FConditionScan {
  std::optional<std::size_t> first_increase;      // k with f(k+1) > f(k)
  std::optional<std::size_t> first_flog_decrease; // k with f(k+1)log(k+1) < f(k)log k
  bool ok() const noexcept { return !first_increase && !first_flog_decrease; }
};

/// Scans k in [k_lo, k_hi) for the monotonicity conditions on f. Needs
/// r up to k_hi + 1.
FConditionScan scan_f_conditions(const ToeplitzSequence& seq, std::size_t k_lo,
                                 std::size_t k_hi);

}  // namespace maxcorr
