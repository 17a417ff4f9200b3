#include "maxcorr/sampler.hpp"

#include "cholesky_detail.hpp"
#include "maxcorr/error.hpp"
#include "maxcorr/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <string>

namespace maxcorr {
namespace {

void require_shape(std::size_t n, std::size_t p) {
  if (n < 3 || p < 3)
    throw ValidationError("sample needs n >= 3 and p >= 3, got n=" + std::to_string(n) +
                          " p=" + std::to_string(p));
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw ValidationError("n exceeds the stream row range");
}

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

Matrix normal_rows(std::size_t n, std::size_t p, const StreamSeed& seed, int threads) {
  Matrix z(n, p);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t k = 0; k < rows; ++k)
    fill_normal_row(seed, StreamTag::kSample, static_cast<std::uint32_t>(k),
                    z.row(static_cast<std::size_t>(k)));
  return z;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

}  // namespace

SampleMatrix::SampleMatrix(Matrix data) : data_(std::move(data)) {
  require_shape(data_.rows(), data_.cols());
  for (std::size_t k = 0; k < data_.rows(); ++k)
    for (std::size_t j = 0; j < data_.cols(); ++j)
      if (!std::isfinite(data_(k, j)))
        throw ValidationError("non-finite entry at row " + std::to_string(k + 1) + ", column " +
                              std::to_string(j + 1));
}

Matrix cholesky(const Matrix& m) {
  detail::require_symmetric(m);
  Matrix l = m;
  if (auto failed = detail::cholesky_in_place(l, detail::default_pivot_tol(m)))
    throw NotPositiveDefinite(failed->index, failed->value);
  return l;
}

SampleMatrix sample_ar1(std::size_t n, std::size_t p, double r, const StreamSeed& seed,
                        int threads) {
  validate_model(Ar1Model{r}, p);
  require_shape(n, p);
  Matrix x = normal_rows(n, p, seed, threads);
  const double s = std::sqrt(1.0 - r * r);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t k = 0; k < rows; ++k) {
    double* row = x.row(static_cast<std::size_t>(k)).data();
    for (std::size_t j = 1; j < p; ++j) row[j] = r * row[j - 1] + s * row[j];
  }
  return SampleMatrix(std::move(x));
}

ToeplitzSampler::ToeplitzSampler(const CovarianceModel& model, std::size_t p)
    : factor_(cholesky(build_matrix(model, p))), factor_t_(transpose(factor_)) {}

SampleMatrix ToeplitzSampler::operator()(std::size_t n, const StreamSeed& seed,
                                         int threads) const {
  const std::size_t p = factor_.rows();
  require_shape(n, p);
  const Matrix z = normal_rows(n, p, seed, threads);
  Matrix x(n, p);
  kernels::multiply_upper(z.data(), n, p, factor_t_.data(), x.data(), kernels::kDefaultBlock,
                          threads);
  return SampleMatrix(std::move(x));
}

SampleMatrix sample_toeplitz(std::size_t n, std::size_t p, const CovarianceModel& model,
                             const StreamSeed& seed, int threads) {
  return ToeplitzSampler(model, p)(n, seed, threads);
}

ModelSampler::ModelSampler(const CovarianceModel& model, std::size_t p)
    : p_(p),
      impl_(std::holds_alternative<Ar1Model>(model)
                ? decltype(impl_){std::get<Ar1Model>(model)}
                : decltype(impl_){ToeplitzSampler(model, p)}) {
  validate_model(model, p);
}

SampleMatrix ModelSampler::operator()(std::size_t n, const StreamSeed& seed, int threads) const {
  if (const auto* ar = std::get_if<Ar1Model>(&impl_)) return sample_ar1(n, p_, ar->r, seed, threads);
  return std::get<ToeplitzSampler>(impl_)(n, seed, threads);
}

}  // namespace maxcorr
