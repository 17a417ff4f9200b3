#pragma once

// Tests of H0: Sigma = I and H0: Sigma is AR(1) based on the largest sample
// correlation, plus Monte Carlo power estimation.

#include "maxcorr/covariance.hpp"
#include "maxcorr/limits.hpp"
#include "maxcorr/matrix.hpp"
#include "maxcorr/rng.hpp"
#include "maxcorr/stats.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace maxcorr {

enum class TestKind { kIdentity, kAr1Structure };
std::string_view to_string(TestKind kind);

struct TestOutcome {
  TestKind test = TestKind::kIdentity;
  double statistic = 0.0;       // sqrt(n-1) L~ (identity) or sqrt(n) L (AR(1))
  double critical_value = 0.0;  // reject iff statistic > critical_value
  double normalized = 0.0;      // constants.apply(L), compared against the law
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
  LimitLaw law = GumbelK{};
  NormConstants constants;
  ExtremeStat extreme;
  std::optional<double> r_hat;
};

struct IdentityTestOptions {
  bool centered = true;  // false: uncentered L with sqrt(n) scaling
  StatOptions stat;
};

TestOutcome identity_test(const Matrix& x, double alpha, const IdentityTestOptions& opts = {});

/// Mean over i of the lag-one sample covariances between columns i and i+1.
double estimate_r_hat(const Matrix& x);

/// Throws DegenerateData if |r_hat| >= 1.
TestOutcome ar1_structure_test(const Matrix& x, double alpha, const StatOptions& opts = {});

/// Produces the data matrix of one replicate. Must be safe to call
/// concurrently.
using SampleSource = std::function<Matrix(const StreamSeed&)>;

struct PowerConfig {
  TestKind test = TestKind::kIdentity;
  std::vector<double> alphas{0.05};
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  int workers = 0;  // 0: OpenMP default
};

struct PowerStudy {
  std::vector<double> rates;       // per alpha
  std::vector<double> normalized;  // per replicate, the statistic compared to the law
};

/// Replicate k uses StreamSeed{seed, k}. Identical for any worker count.
PowerStudy power_study(const PowerConfig& cfg, const SampleSource& source);

/// Rejection frequency per alpha over `reps` replicates.
std::vector<double> power_curve(const PowerConfig& cfg, const SampleSource& source);

/// Convenience overloads drawing n x p samples from `alt`.
PowerStudy power_study(const PowerConfig& cfg, const CovarianceModel& alt, std::size_t n,
                       std::size_t p);
std::vector<double> power_curve(const PowerConfig& cfg, const CovarianceModel& alt,
                                std::size_t n, std::size_t p);

}  // namespace maxcorr
