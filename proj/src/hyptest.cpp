#include "maxcorr/hyptest.hpp"

#include "maxcorr/error.hpp"
#include "maxcorr/sampler.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <numbers>
#include <string>

namespace maxcorr {
namespace {

const double kLog4Pi = std::log(4.0 * std::numbers::pi);

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError("alpha must lie in (0,1), got " + std::to_string(alpha));
}

double log_p_checked(double p) {
  if (!(p > std::numbers::e)) throw DomainError("p must exceed e");
  return std::log(p);
}

// Everything but alpha, so a power curve evaluates each replicate once.
struct Prepared {
  TestKind kind;
  ExtremeStat extreme;
  double scale;  // sqrt(n-1), sqrt(n)
  NormConstants constants;
  std::optional<double> r_hat;
};

Prepared prepare_identity(const Matrix& x, const IdentityTestOptions& opts) {
  const double p = static_cast<double>(x.cols());
  log_p_checked(p);
  const ExtremeStat e = opts.centered ? max_corr_centered(x, opts.stat)
                                      : max_corr_uncentered(x, opts.stat);
  const double eff_n = static_cast<double>(x.rows()) - (opts.centered ? 1.0 : 0.0);
  return {TestKind::kIdentity, e, std::sqrt(eff_n), constants_subcritical(eff_n, p), {}};
}

Prepared prepare_ar1(const Matrix& x, const StatOptions& opts) {
  const double n = static_cast<double>(x.rows());
  const double lp = log_p_checked(static_cast<double>(x.cols()));
  const double r = estimate_r_hat(x);
  if (!(std::abs(r) < 1.0))
    throw DegenerateData("AR(1) estimate out of range: r_hat = " + std::to_string(r));
  const ExtremeStat e = max_corr_uncentered(x, opts);
  const double c = std::sqrt(2.0 * n * lp) / (1.0 - r * r);
  const NormConstants k{c, r * c + 2.0 * lp - 0.5 * (std::log(lp) + kLog4Pi),
                        Regime::kSupercritical};
  return {TestKind::kAr1Structure, e, std::sqrt(n), k, r};
}

TestOutcome decide(const Prepared& pr, double alpha) {
  require_alpha(alpha);
  TestOutcome out;
  out.test = pr.kind;
  out.alpha = alpha;
  out.extreme = pr.extreme;
  out.constants = pr.constants;
  out.r_hat = pr.r_hat;
  out.law = pr.kind == TestKind::kIdentity ? LimitLaw{GumbelK{kK1}} : LimitLaw{GumbelK{1.0}};
  const double q = quantile(out.law, alpha);
  out.statistic = pr.scale * pr.extreme.value;
  // The critical value is the normalized threshold q mapped back to the
  // statistic's scale.
  out.critical_value = (q + pr.constants.offset) / pr.constants.multiplier * pr.scale;
  out.normalized = pr.constants.apply(pr.extreme.value);
  out.p_value = 1.0 - cdf(out.law, out.normalized);
  out.reject = out.statistic > out.critical_value;
  return out;
}

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

std::string_view to_string(TestKind kind) {
  return kind == TestKind::kIdentity ? "identity" : "ar1";
}

TestOutcome identity_test(const Matrix& x, double alpha, const IdentityTestOptions& opts) {
  require_alpha(alpha);
  return decide(prepare_identity(x, opts), alpha);
}

double estimate_r_hat(const Matrix& x) {
  const std::size_t n = x.rows(), p = x.cols();
  if (p < 2 || n < 2) throw ValidationError("r_hat needs n >= 2 and p >= 2");
  std::vector<double> mean(p, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < p; ++j) mean[j] += x(k, j);
  for (double& m : mean) m /= static_cast<double>(n);
  std::vector<double> h(p - 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = x.row(k);
    for (std::size_t i = 0; i + 1 < p; ++i) h[i] += (row[i] - mean[i]) * (row[i + 1] - mean[i + 1]);
  }
  double total = 0.0;
  for (double v : h) total += v / static_cast<double>(n - 1);
  return total / static_cast<double>(p - 1);
}

TestOutcome ar1_structure_test(const Matrix& x, double alpha, const StatOptions& opts) {
  require_alpha(alpha);
  return decide(prepare_ar1(x, opts), alpha);
}

PowerStudy power_study(const PowerConfig& cfg, const SampleSource& source) {
  if (cfg.reps < 1) throw ValidationError("power curve needs reps >= 1");
  if (cfg.alphas.empty()) throw ValidationError("power curve needs at least one alpha");
  for (double a : cfg.alphas) require_alpha(a);

  const std::size_t na = cfg.alphas.size();
  std::vector<unsigned char> rejected(cfg.reps * na, 0);
  PowerStudy study;
  study.normalized.assign(cfg.reps, 0.0);
  std::exception_ptr error;
  std::size_t error_rep = cfg.reps;
  const auto reps = static_cast<std::ptrdiff_t>(cfg.reps);
  const StatOptions serial{kernels::kDefaultBlock, 1};

#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(cfg.workers))
  for (std::ptrdiff_t k = 0; k < reps; ++k) {
    const auto rep = static_cast<std::size_t>(k);
    try {
      const Matrix x = source(StreamSeed{cfg.seed, rep});
      const Prepared pr = cfg.test == TestKind::kIdentity
                              ? prepare_identity(x, IdentityTestOptions{true, serial})
                              : prepare_ar1(x, serial);
      for (std::size_t a = 0; a < na; ++a) {
        const TestOutcome t = decide(pr, cfg.alphas[a]);
        rejected[rep * na + a] = t.reject ? 1 : 0;
        study.normalized[rep] = t.normalized;
      }
    } catch (...) {
#pragma omp critical(maxcorr_power_error)
      if (rep < error_rep) {
        error_rep = rep;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);

  study.rates.assign(na, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    std::size_t count = 0;
    for (std::size_t rep = 0; rep < cfg.reps; ++rep) count += rejected[rep * na + a];
    study.rates[a] = static_cast<double>(count) / static_cast<double>(cfg.reps);
  }
  return study;
}

std::vector<double> power_curve(const PowerConfig& cfg, const SampleSource& source) {
  return power_study(cfg, source).rates;
}

PowerStudy power_study(const PowerConfig& cfg, const CovarianceModel& alt, std::size_t n,
                       std::size_t p) {
  const ModelSampler sampler(alt, p);
  return power_study(cfg, [&](const StreamSeed& s) { return sampler(n, s, 1).matrix(); });
}

std::vector<double> power_curve(const PowerConfig& cfg, const CovarianceModel& alt,
                                std::size_t n, std::size_t p) {
  return power_study(cfg, alt, n, p).rates;
}

}  // namespace maxcorr
