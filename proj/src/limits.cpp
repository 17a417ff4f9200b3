#include "maxcorr/limits.hpp"

#include "maxcorr/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace maxcorr {
namespace {

const double kLog4Pi = std::log(4.0 * std::numbers::pi);

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double log_p_checked(double p) {
  if (!(p > std::numbers::e)) throw DomainError("p must exceed e, got " + std::to_string(p));
  return std::log(p);
}

void require_r(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw ValidationError("r must lie in [0,1), got " + std::to_string(r));
}

double gumbel_cdf(double K, double x) { return std::exp(-K * std::exp(-x)); }

// Fixed composite rule: 32 panels of 20-point Gauss-Legendre over z in
// [-10, 10]. A fixed node set keeps the cdf exactly monotone in x.
double normal_gumbel_cdf(double gamma0, double x) {
  const double shift = x + gamma0 + 0.5 * kLog4Pi;
  if (gamma0 == 0.0) return gumbel_cdf(1.0, shift);
  const double scale = std::sqrt(2.0 * gamma0);
  constexpr int kPanels = 32;
  constexpr double kLo = -10.0, kHi = 10.0;
  constexpr double kWidth = (kHi - kLo) / kPanels;
  const auto integrand = [&](double z) {
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return phi * gumbel_cdf(1.0, shift - scale * z);
  };
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double a = kLo + k * kWidth;
    total += boost::math::quadrature::gauss<double, 20>::integrate(integrand, a, a + kWidth);
  }
  return std::clamp(total, 0.0, 1.0);
}

double bisect_inverse(const LimitLaw& law, double u) {
  double lo = -50.0, hi = 100.0;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(law, mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void require_probability(double a, const char* what) {
  if (!(a > 0.0 && a < 1.0))
    throw ValidationError(std::string(what) + " must lie in (0,1), got " + std::to_string(a));
}

}  // namespace

double critical_k2() { return (0.5 - 1.0 / std::sqrt(8.0)) * kLog4Pi; }

void validate_law(const LimitLaw& law) {
  std::visit(Overloaded{
                 [](const GumbelK& g) {
                   if (!(g.K > 0.0) || !std::isfinite(g.K))
                     throw ValidationError("GumbelK needs K > 0");
                 },
                 [](const CriticalMix& c) {
                   if (!(c.K1 > 0.0) || !std::isfinite(c.K1) || !std::isfinite(c.K2) ||
                       !std::isfinite(c.lambda))
                     throw ValidationError("CriticalMix needs K1 > 0 and finite K2, lambda");
                 },
                 [](const NormalGumbelMix& m) {
                   if (!(m.gamma0 >= 0.0) || !std::isfinite(m.gamma0))
                     throw ValidationError("NormalGumbelMix needs gamma0 >= 0");
                 },
                 [](const StdNormal&) {},
             },
             law);
}

std::string_view law_name(const LimitLaw& law) {
  return std::visit(Overloaded{
                        [](const GumbelK&) { return std::string_view("gumbelK"); },
                        [](const CriticalMix&) { return std::string_view("criticalMix"); },
                        [](const NormalGumbelMix&) { return std::string_view("normalGumbelMix"); },
                        [](const StdNormal&) { return std::string_view("stdNormal"); },
                    },
                    law);
}

double cdf(const LimitLaw& law, double x) {
  validate_law(law);
  if (std::isnan(x)) throw ValidationError("cdf argument is NaN");
  return std::visit(
      Overloaded{
          [x](const GumbelK& g) { return gumbel_cdf(g.K, x); },
          [x](const CriticalMix& c) {
            return std::exp(-c.K1 * std::exp(-x) -
                            std::exp(-x / std::numbers::sqrt2 - c.K2 + c.lambda));
          },
          [x](const NormalGumbelMix& m) { return normal_gumbel_cdf(m.gamma0, x); },
          [x](const StdNormal&) { return normal_cdf(x); },
      },
      law);
}

double inverse_cdf(const LimitLaw& law, double u) {
  validate_law(law);
  require_probability(u, "probability");
  if (const auto* g = std::get_if<GumbelK>(&law)) return std::log(g->K) - std::log(-std::log(u));
  if (std::holds_alternative<StdNormal>(law)) return normal_quantile(u);
  return bisect_inverse(law, u);
}

double quantile(const LimitLaw& law, double alpha) {
  validate_law(law);
  require_probability(alpha, "alpha");
  if (const auto* g = std::get_if<GumbelK>(&law))
    return std::log(g->K) - std::log(-std::log1p(-alpha));
  if (std::holds_alternative<StdNormal>(law)) return -normal_quantile(alpha);
  return bisect_inverse(law, 1.0 - alpha);
}

double sample_law(const LimitLaw& law, const StreamSeed& seed) {
  validate_law(law);
  const auto u = uniform_pair(seed, StreamTag::kLaw, 0, 0);
  const auto std_gumbel = [](double v) { return -std::log(-std::log(v)); };
  return std::visit(
      Overloaded{
          [&](const GumbelK& g) { return std::log(g.K) + std_gumbel(u[0]); },
          [&](const CriticalMix& c) {
            const double first = std::log(c.K1) + std_gumbel(u[0]);
            const double second = std::numbers::sqrt2 * (c.lambda - c.K2 + std_gumbel(u[1]));
            return std::max(first, second);
          },
          [&](const NormalGumbelMix& m) {
            return -m.gamma0 + std::sqrt(2.0 * m.gamma0) * normal_quantile(u[0]) +
                   std_gumbel(u[1]) - 0.5 * kLog4Pi;
          },
          [&](const StdNormal&) { return normal_quantile(u[0]); },
      },
      law);
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kSubcritical: return "subcritical";
    case Regime::kCritical: return "critical";
    case Regime::kSupercritical: return "supercritical";
    case Regime::kNearOne: return "nearOne";
    case Regime::kToeplitz: return "toeplitz";
  }
  return "unknown";
}

NormConstants constants_subcritical(double n, double p) {
  const double lp = log_p_checked(p);
  return {2.0 * std::sqrt(n * lp), 4.0 * lp - 0.5 * (std::log(lp) + kLog4Pi),
          Regime::kSubcritical};
}

NormConstants constants_supercritical(double n, double p, double r) {
  require_r(r);
  const double lp = log_p_checked(p);
  const double c = std::sqrt(2.0 * n * lp) / (1.0 - r * r);
  return {c, r * c + 2.0 * lp - 0.5 * (std::log(lp) + kLog4Pi), Regime::kSupercritical};
}

NormConstants constants_toeplitz(double n, double p, GapIndex d, double r1) {
  require_r(r1);
  if (d.d < 1) throw ValidationError("gap index must be positive");
  const double lpd = log_p_checked(p * static_cast<double>(d.d));
  const double a = std::sqrt(2.0 * n * lpd) / (1.0 - r1 * r1);
  return {a, r1 * a + 2.0 * lpd - 0.5 * std::log(lpd), Regime::kToeplitz};
}

double clt_normalize_toeplitz(double Ln, double n, double p, double r1, double f) {
  require_r(r1);
  if (!(f > 0.0 && f <= 1.0)) throw DomainError("f(p-1) must lie in (0,1], got " + std::to_string(f));
  const double lp = log_p_checked(p);
  const double s = std::sqrt(2.0 * lp);
  const double rn = std::sqrt(n);
  return (rn * Ln - r1 * rn) / ((1.0 - r1 * r1) * std::sqrt(f)) -
         std::sqrt((1.0 - f) / f) * (s - (std::log(lp) + kLog4Pi) / (2.0 * s));
}

RegimeReport classify_regime(double n, double p, double r, const RegimeOptions& opts) {
  if (!(n >= 3.0) || !(p >= 3.0)) throw ValidationError("classify_regime needs n, p >= 3");
  require_r(r);
  const double lp = std::log(p);
  RegimeReport rep;
  rep.n = n;
  rep.p = p;
  rep.r = r;
  rep.L = r * std::sqrt(n) / std::sqrt(lp);
  rep.kappa = rep.L - kPhaseThreshold;
  rep.lambda = std::numbers::sqrt2 * lp * rep.kappa + (1.0 / std::sqrt(8.0) - 0.5) * std::log(lp);

  if (r == 0.0) {
    rep.regime = Regime::kSubcritical;
  } else if (r > 1.0 - opts.c0 / lp) {
    rep.regime = Regime::kNearOne;
    rep.supported = false;
  } else if (std::abs(rep.lambda) < opts.lambda_band) {
    rep.regime = Regime::kCritical;
  } else if (rep.L < kPhaseThreshold) {
    rep.regime = Regime::kSubcritical;
  } else {
    rep.regime = r >= opts.near_one_r ? Regime::kNearOne : Regime::kSupercritical;
  }
  return rep;
}

LimitPair limit_for_regime(const RegimeReport& rep) {
  if (!rep.supported)
    throw DomainError("unsupported regime: r = " + std::to_string(rep.r) +
                      " is closer to 1 than the near-one boundary allows");
  switch (rep.regime) {
    case Regime::kSubcritical:
      return {constants_subcritical(rep.n, rep.p), GumbelK{kK1}};
    case Regime::kCritical:
      return {constants_subcritical(rep.n, rep.p), CriticalMix{kK1, critical_k2(), rep.lambda}};
    case Regime::kSupercritical:
    case Regime::kNearOne: {
      auto c = constants_supercritical(rep.n, rep.p, rep.r);
      c.source = rep.regime;
      return {c, GumbelK{1.0}};
    }
    case Regime::kToeplitz:
      break;
  }
  throw DomainError("Toeplitz limits need the gap index; use limit_for_toeplitz");
}

LimitPair limit_for_toeplitz(double n, double p, GapIndex d, double r1, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw DomainError("gamma must be finite and non-negative");
  const double g0 = 2.0 * gamma * gamma / ((1.0 + r1) * (1.0 + r1));
  return {constants_toeplitz(n, p, d, r1), NormalGumbelMix{g0}};
}

double gamma_plugin(const ToeplitzSequence& seq, std::size_t p) {
  return seq[p] * std::sqrt(std::log(static_cast<double>(p)));
}

}  // namespace maxcorr
