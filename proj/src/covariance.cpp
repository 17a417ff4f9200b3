#include "maxcorr/covariance.hpp"

#include "cholesky_detail.hpp"
#include "maxcorr/error.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

namespace maxcorr {

ToeplitzSequence::ToeplitzSequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("Toeplitz sequence is empty");
  if (values_[0] != 1.0) throw ValidationError("Toeplitz sequence must start with r_0 = 1");
  for (std::size_t k = 1; k < values_.size(); ++k) {
    const double r = values_[k];
    if (!std::isfinite(r) || r < 0.0 || r > 1.0)
      throw ValidationError("Toeplitz sequence entry r_" + std::to_string(k) +
                            " outside [0,1]");
    if (r > values_[k - 1])
      throw ValidationError("Toeplitz sequence increases at lag " + std::to_string(k));
  }
}

ToeplitzSequence ToeplitzSequence::from_function(const std::function<double(std::size_t)>& r,
                                                 std::size_t horizon) {
  if (horizon == 0) throw ValidationError("Toeplitz horizon must be positive");
  std::vector<double> v(horizon);
  v[0] = 1.0;
  for (std::size_t k = 1; k < horizon; ++k) v[k] = r(k);
  return ToeplitzSequence(std::move(v));
}

ToeplitzSequence ToeplitzSequence::geometric(double r, std::size_t horizon) {
  if (!(r >= 0.0 && r < 1.0)) throw ValidationError("geometric sequence needs 0 <= r < 1");
  return from_function([r](std::size_t k) { return std::pow(r, static_cast<double>(k)); },
                       horizon);
}

ToeplitzSequence ToeplitzSequence::logpow(double a, double A, double eps, std::size_t horizon) {
  if (!(a > 0.0) || !(A >= 1.0))
    throw ValidationError("logpow sequence needs a > 0 and A >= 1");
  const double expo = -0.5 + eps;
  return from_function(
      [=](std::size_t k) { return a * std::pow(std::log(A + static_cast<double>(k)), expo); },
      horizon);
}

double ToeplitzSequence::operator[](std::size_t k) const {
  if (k >= values_.size())
    throw ValidationError("Toeplitz lag " + std::to_string(k) + " beyond horizon " +
                          std::to_string(values_.size()));
  return values_[k];
}

void validate_model(const CovarianceModel& model, std::size_t p) {
  if (p < 2) throw ValidationError("dimension p must be at least 2");
  if (const auto* ar = std::get_if<Ar1Model>(&model)) {
    if (!(ar->r >= 0.0 && ar->r < 1.0))
      throw ValidationError("AR(1) parameter r must lie in [0,1), got " + std::to_string(ar->r));
  } else {
    const auto& seq = std::get<ToeplitzModel>(model).seq;
    if (seq.horizon() < p)
      throw ValidationError("Toeplitz sequence has " + std::to_string(seq.horizon()) +
                            " lags, need " + std::to_string(p));
  }
}

double model_correlation(const CovarianceModel& model, std::size_t lag) {
  if (const auto* ar = std::get_if<Ar1Model>(&model))
    return std::pow(ar->r, static_cast<double>(lag));
  return std::get<ToeplitzModel>(model).seq[lag];
}

Matrix build_matrix(const CovarianceModel& model, std::size_t p) {
  validate_model(model, p);
  std::vector<double> lags(p);
  for (std::size_t k = 0; k < p; ++k) lags[k] = model_correlation(model, k);
  lags[0] = 1.0;
  Matrix m(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) m(i, j) = lags[i > j ? i - j : j - i];
  return m;
}

PdReport validate_pd(const Matrix& m, std::optional<double> tol) {
  detail::require_symmetric(m);
  Matrix work = m;
  const double t = tol.value_or(detail::default_pivot_tol(m));
  PdReport report;
  if (auto failed = detail::cholesky_in_place(work, t)) {
    report.pivot_index = failed->index;
    report.pivot = failed->value;
    report.diagnostic = "pivot " + std::to_string(failed->index) + " = " +
                        std::to_string(failed->value) + " <= " + std::to_string(t);
    return report;
  }
  report.passed = true;
  return report;
}

PolyaReport polya_check(const ToeplitzSequence& seq, std::size_t p) {
  if (seq.horizon() < p + 1)
    throw ValidationError("Polya check needs r_0..r_" + std::to_string(p));
  const auto r = seq.values();
  for (std::size_t k = 1; k <= p; ++k) {
    if (r[k] < 0.0 || r[k] > r[k - 1]) return {PolyaVerdict::kInconclusive, k};
  }
  for (std::size_t k = 1; k + 1 <= p; ++k) {
    if (r[k - 1] + r[k + 1] < 2.0 * r[k]) return {PolyaVerdict::kInconclusive, k};
  }
  return {PolyaVerdict::kPass, 0};
}

GapIndex gap_index(const ToeplitzSequence& seq, std::size_t horizon) {
  const auto r = seq.values();
  for (std::size_t k = 1; k <= horizon && k + 1 < r.size(); ++k)
    if (r[k] > r[k + 1]) return GapIndex{k};
  throw ValidationError("no gap within horizon " + std::to_string(horizon));
}

double s_var(double r, std::size_t lag) {
  const double v = 1.0 - std::pow(r, 2.0 * static_cast<double>(lag));
  return v * v;
}

double s_cov_adjacent(double r, std::size_t k) {
  const double one_minus = 1.0 - r * r;
  return 0.5 * std::pow(r, 2.0 * static_cast<double>(k)) * one_minus * one_minus;
}

double f_seq(const ToeplitzSequence& seq, std::size_t k) {
  if (k == 0) return 1.0;
  const double r1 = seq[1];
  const double rk = seq[k];
  const double rm = seq[k - 1];
  const double rp = seq[k + 1];
  const double denom = (1.0 - r1 * r1) * (1.0 - r1 * r1);
  const double bracket = r1 * r1 * rk * rk + 0.5 * r1 * r1 * (rm * rm + rp * rp) + rk * rk +
                         rm * rp - 2.0 * r1 * rk * (rm + rp);
  return bracket / denom;
}

double q_cov(const ToeplitzSequence& seq, GapIndex d, std::size_t i, std::size_t s,
             std::size_t j, std::size_t t) {
  if (s < 1 || s > d.d || t < 1 || t > d.d)
    throw ContractViolation("band offsets must lie in [1, d]");
  if (i < 1 || j < 1) throw ContractViolation("indices are 1-based");
  const double r1 = seq[1];
  const double c = 1.0 / (1.0 - r1 * r1);

  // Q = v^T A v on (x_i, x_{i+s}) and w^T B w on (x_j, x_{j+t}); A and B share
  // the same coefficients.
  const std::array<std::size_t, 4> idx{i, i + s, j, j + t};
  std::array<std::array<double, 4>, 4> cov{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const std::size_t lag = idx[a] > idx[b] ? idx[a] - idx[b] : idx[b] - idx[a];
      cov[a][b] = seq[lag];
    }
  const std::array<std::array<double, 2>, 2> coef{{{-0.5 * r1 * c, 0.5 * c},
                                                   {0.5 * c, -0.5 * r1 * c}}};
  double total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int cc = 2; cc < 4; ++cc)
        for (int dd = 2; dd < 4; ++dd) {
          const double wick = cov[a][b] * cov[cc][dd] + cov[a][cc] * cov[b][dd] +
                              cov[a][dd] * cov[b][cc];
          total += coef[a][b] * coef[cc - 2][dd - 2] * wick;
        }
  return total;
}

FConditionScan scan_f_conditions(const ToeplitzSequence& seq, std::size_t k_lo,
                                 std::size_t k_hi) {
  if (k_lo < 1) throw ValidationError("f-condition scan starts at k >= 1");
  FConditionScan scan;
  double f_prev = f_seq(seq, k_lo);
  for (std::size_t k = k_lo; k < k_hi; ++k) {
    const double f_next = f_seq(seq, k + 1);
    if (!scan.first_increase && f_next > f_prev) scan.first_increase = k;
    if (!scan.first_flog_decrease &&
        f_next * std::log(static_cast<double>(k + 1)) < f_prev * std::log(static_cast<double>(k)))
      scan.first_flog_decrease = k;
    if (scan.first_increase && scan.first_flog_decrease) break;
    f_prev = f_next;
  }
  return scan;
}

}  // namespace maxcorr
