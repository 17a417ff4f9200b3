#pragma once

// Limiting laws of the normalized maximum correlation, the normalizing
// constants for each dependence regime, and the finite-(n,p) regime
// classifier.

#include "maxcorr/covariance.hpp"
#include "maxcorr/rng.hpp"

#include <numbers>
#include <string>
#include <string_view>
#include <variant>

namespace maxcorr {

/// cdf exp(-K e^{-x}).
struct GumbelK {
  double K = 1.0;
};

/// Maximum of independent variables with cdfs exp(-K1 e^{-x}) and
/// exp(-e^{-x/sqrt2 - K2 + lambda}).
struct CriticalMix {
  double K1 = 0.0;
  double K2 = 0.0;
  double lambda = 0.0;
};

/// -g + sqrt(2g) Z + G - log(4 pi)/2 with Z ~ N(0,1) independent of a standard
/// Gumbel G.
struct NormalGumbelMix {
  double gamma0 = 0.0;
};

struct StdNormal {};

using LimitLaw = std::variant<GumbelK, CriticalMix, NormalGumbelMix, StdNormal>;

inline constexpr double kPhaseThreshold = 2.0 - std::numbers::sqrt2;
inline const double kK1 = 1.0 / (2.0 * std::numbers::sqrt2);
/// (1/2 - 8^{-1/2}) log 4 pi.
double critical_k2();

/// Throws ValidationError for K <= 0, gamma0 < 0 or non-finite parameters.
void validate_law(const LimitLaw& law);
std::string_view law_name(const LimitLaw& law);

double cdf(const LimitLaw& law, double x);
/// Upper-alpha point: cdf(quantile(law, a)) = 1 - a.
double quantile(const LimitLaw& law, double alpha);
/// Lower point: cdf(inverse_cdf(law, u)) = u.
double inverse_cdf(const LimitLaw& law, double u);
/// Exact draw from the law using the law stream of `seed`.
double sample_law(const LimitLaw& law, const StreamSeed& seed);

enum class Regime { kSubcritical, kCritical, kSupercritical, kNearOne, kToeplitz };
std::string_view to_string(Regime regime);

/// Normalized statistic = multiplier * L - offset.
struct NormConstants {
  double multiplier = 1.0;
  double offset = 0.0;
  Regime source = Regime::kSubcritical;

  double apply(double L) const noexcept { return multiplier * L - offset; }
};

/// a_n = 2 sqrt(n log p), b_n = 4 log p - (log log p + log 4 pi)/2.
NormConstants constants_subcritical(double n, double p);
/// c_n = sqrt(2 n log p)/(1 - r^2), d_n = r c_n + 2 log p - (log log p + log 4 pi)/2.
NormConstants constants_supercritical(double n, double p, double r);
/// a* = sqrt(2 n log(pd))/(1 - r1^2), b* = r1 a* + 2 log(pd) - log log(pd)/2.
NormConstants constants_toeplitz(double n, double p, GapIndex d, double r1);

/// Standardization whose limit is N(0,1) when f(p-1) stays bounded away from 0.
/// Accepts f in (0,1]; f = 1 drops the centering term.
double clt_normalize_toeplitz(double Ln, double n, double p, double r1, double f_pminus1);

struct RegimeOptions {
  double lambda_band = 10.0;
  double c0 = 1.0;          // NearOne boundary 1 - r = c0 / log p
  double near_one_r = 0.9;  // supercritical r at or above this is reported as NearOne
};

struct RegimeReport {
  double n = 0.0;
  double p = 0.0;
  double r = 0.0;
  double L = 0.0;  // r sqrt(n) / sqrt(log p)
  double kappa = 0.0;
  double lambda = 0.0;
  Regime regime = Regime::kSubcritical;
  bool supported = true;  // false when no limit theorem covers (n, p, r)
  double threshold = kPhaseThreshold;
};

RegimeReport classify_regime(double n, double p, double r, const RegimeOptions& opts = {});

struct LimitPair {
  NormConstants constants;
  LimitLaw law;
};

/// Throws DomainError for an unsupported report.
LimitPair limit_for_regime(const RegimeReport& report);

/// Toeplitz limit with gamma = lim r_p sqrt(log p).
LimitPair limit_for_toeplitz(double n, double p, GapIndex d, double r1, double gamma);

/// Plug-in r_p sqrt(log p) at the sample dimension; needs r up to lag p.
double gamma_plugin(const ToeplitzSequence& seq, std::size_t p);

}  // namespace maxcorr
