#pragma once

// Gaussian samples with AR(1) or Toeplitz covariance, generated from
// counter-based streams so any row of any replicate can be produced
// independently.

#include "maxcorr/covariance.hpp"
#include "maxcorr/matrix.hpp"
#include "maxcorr/rng.hpp"

#include <cstddef>
#include <variant>

namespace maxcorr {

/// n x p observations (rows are i.i.d. draws). Entries are finite and
/// n, p >= 3.
class SampleMatrix {
 public:
  explicit SampleMatrix(Matrix data);

  std::size_t n() const noexcept { return data_.rows(); }
  std::size_t p() const noexcept { return data_.cols(); }
  const Matrix& matrix() const noexcept { return data_; }
  operator const Matrix&() const noexcept { return data_; }  // NOLINT: implicit by design

 private:
  Matrix data_;
};

/// Lower-triangular L with L L^T = m. Throws NotPositiveDefinite with the
/// first failing pivot, ContractViolation if m is not symmetric.
Matrix cholesky(const Matrix& m);

/// Exact recursion x_1 = e_1, x_{j+1} = r x_j + sqrt(1 - r^2) e_{j+1}; O(np).
SampleMatrix sample_ar1(std::size_t n, std::size_t p, double r, const StreamSeed& seed,
                        int threads = 0);

/// Draws from N(0, Sigma) through a Cholesky factor computed once at
/// construction and reused for every call.
class ToeplitzSampler {
 public:
  ToeplitzSampler(const CovarianceModel& model, std::size_t p);

  SampleMatrix operator()(std::size_t n, const StreamSeed& seed, int threads = 0) const;

  std::size_t p() const noexcept { return factor_.rows(); }
  const Matrix& factor() const noexcept { return factor_; }

 private:
  Matrix factor_;
  Matrix factor_t_;  // L^T, the layout the product kernel reads
};

SampleMatrix sample_toeplitz(std::size_t n, std::size_t p, const CovarianceModel& model,
                             const StreamSeed& seed, int threads = 0);

/// Dispatches AR(1) models to the recursion and Toeplitz models to the
/// factor. Construct once per campaign; calls are thread-safe.
class ModelSampler {
 public:
  ModelSampler(const CovarianceModel& model, std::size_t p);

  SampleMatrix operator()(std::size_t n, const StreamSeed& seed, int threads = 0) const;

 private:
  std::size_t p_;
  std::variant<Ar1Model, ToeplitzSampler> impl_;
};

}  // namespace maxcorr
