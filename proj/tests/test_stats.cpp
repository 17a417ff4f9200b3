#include "maxcorr/error.hpp"
#include "maxcorr/montecarlo.hpp"
#include "maxcorr/sampler.hpp"
#include "maxcorr/stats.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace maxcorr;

namespace {

Matrix gaussian(std::size_t n, std::size_t p, std::uint64_t seed) {
  return sample_ar1(n, p, 0.0, {seed, 0}).matrix();
}

// Plain two-pass Pearson correlation of two columns.
double pearson(const Matrix& x, std::size_t a, std::size_t b) {
  const std::size_t n = x.rows();
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < n; ++k) {
    ma += x(k, a);
    mb += x(k, b);
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sab += (x(k, a) - ma) * (x(k, b) - mb);
    saa += (x(k, a) - ma) * (x(k, a) - ma);
    sbb += (x(k, b) - mb) * (x(k, b) - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST(MaxCorr, IdenticalColumnsGiveOne) {
  Matrix x = gaussian(30, 6, 1);
  for (std::size_t k = 0; k < 30; ++k) x(k, 4) = x(k, 1);
  const ExtremeStat e = max_corr_uncentered(x);
  EXPECT_DOUBLE_EQ(e.value, 1.0);
  EXPECT_EQ(e.i, 2u);
  EXPECT_EQ(e.j, 5u);
  EXPECT_EQ(e.n, 30u);
  EXPECT_EQ(e.p, 6u);
  EXPECT_EQ(e.kind, CorrelationKind::kUncentered);
}

TEST(MaxCorr, AffineColumnGivesCenteredOne) {
  Matrix x = gaussian(30, 6, 2);
  for (std::size_t k = 0; k < 30; ++k) x(k, 5) = 2.0 * x(k, 0) + 7.0;
  const ExtremeStat e = max_corr_centered(x);
  EXPECT_NEAR(e.value, 1.0, 1e-12);
  EXPECT_EQ(e.i, 1u);
  EXPECT_EQ(e.j, 6u);
  EXPECT_EQ(e.kind, CorrelationKind::kCentered);
}

TEST(MaxCorr, TinyToyMatrix) {
  Matrix x(2, 3);
  const double v[2][3] = {{1, 2, 1}, {2, 1, 3}};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 3; ++j) x(k, j) = v[k][j];
  const ExtremeStat e = max_corr_uncentered(x);
  EXPECT_NEAR(e.value, 7.0 / std::sqrt(50.0), 1e-15);
  EXPECT_EQ(e.i, 1u);
  EXPECT_EQ(e.j, 3u);
}

TEST(MaxCorr, CenteredDataMatchesUncentered) {
  Matrix x = gaussian(50, 20, 3);
  for (std::size_t j = 0; j < 20; ++j) {
    double m = 0;
    for (std::size_t k = 0; k < 50; ++k) m += x(k, j);
    for (std::size_t k = 0; k < 50; ++k) x(k, j) -= m / 50;
  }
  EXPECT_NEAR(max_corr_centered(x).value, max_corr_uncentered(x).value, 1e-12);
}

TEST(MaxCorr, CenteredMatchesDirectPearson) {
  const Matrix x = gaussian(40, 25, 4);
  double best = -2;
  for (std::size_t a = 0; a < 25; ++a)
    for (std::size_t b = a + 1; b < 25; ++b) best = std::max(best, pearson(x, a, b));
  EXPECT_NEAR(max_corr_centered(x).value, best, 1e-12);
}

TEST(MaxCorr, CenteredAffineInvariance) {
  const Matrix x = gaussian(60, 40, 5);
  Matrix y = x;
  for (std::size_t j = 0; j < 40; ++j)
    for (std::size_t k = 0; k < 60; ++k) y(k, j) = (0.1 + 3.0 * j) * x(k, j) + 5.0 - 2.0 * j;
  const ExtremeStat a = max_corr_centered(x), b = max_corr_centered(y);
  EXPECT_NEAR(a.value, b.value, 1e-12);
  EXPECT_EQ(a.i, b.i);
  EXPECT_EQ(a.j, b.j);
}

TEST(MaxCorr, UncenteredScaleInvarianceOnly) {
  const Matrix x = gaussian(60, 40, 6);
  Matrix scaled = x, shifted = x;
  for (std::size_t j = 0; j < 40; ++j)
    for (std::size_t k = 0; k < 60; ++k) {
      scaled(k, j) = (0.5 + j) * x(k, j);
      shifted(k, j) = x(k, j) + 3.0;
    }
  const ExtremeStat a = max_corr_uncentered(x), b = max_corr_uncentered(scaled);
  EXPECT_NEAR(a.value, b.value, 1e-12);
  EXPECT_EQ(a.i, b.i);
  EXPECT_EQ(a.j, b.j);
  EXPECT_GT(std::abs(max_corr_uncentered(shifted).value - a.value), 0.1);
}

TEST(MaxCorr, DegenerateColumns) {
  Matrix x = gaussian(20, 5, 7);
  Matrix zero = x;
  for (std::size_t k = 0; k < 20; ++k) zero(k, 3) = 0.0;
  try {
    max_corr_uncentered(zero);
    FAIL();
  } catch (const DegenerateColumn& e) {
    EXPECT_EQ(e.column(), 4u);
  }
  Matrix constant = x;
  for (std::size_t k = 0; k < 20; ++k) constant(k, 0) = 2.5;
  try {
    max_corr_centered(constant);
    FAIL();
  } catch (const DegenerateColumn& e) {
    EXPECT_EQ(e.column(), 1u);
  }
  EXPECT_NO_THROW(max_corr_uncentered(constant));
}

TEST(MaxCorr, ThreadCountDoesNotChangeResult) {
  const Matrix x = gaussian(100, 300, 8);
  const ExtremeStat a = max_corr_uncentered(x, {64, 1});
  const ExtremeStat b = max_corr_uncentered(x, {64, 4});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.i, b.i);
}

TEST(BandedMaxCorr, FullBandIsExact) {
  const Matrix x = sample_ar1(80, 70, 0.4, {9, 0});
  for (auto kind : {CorrelationKind::kUncentered, CorrelationKind::kCentered}) {
    const ExtremeStat full = kind == CorrelationKind::kCentered ? max_corr_centered(x)
                                                                : max_corr_uncentered(x);
    const ExtremeStat band = banded_max_corr(x, 69, kind);
    EXPECT_EQ(full.value, band.value);
    EXPECT_EQ(full.i, band.i);
    EXPECT_EQ(full.j, band.j);
  }
}

TEST(BandedMaxCorr, RestrictsLag) {
  const Matrix x = gaussian(30, 50, 10);
  const ExtremeStat b = banded_max_corr(x, 2);
  EXPECT_LE(b.j - b.i, 2u);
  EXPECT_LE(b.value, max_corr_uncentered(x).value);
  EXPECT_THROW(banded_max_corr(x, 0), ValidationError);
  EXPECT_THROW(banded_max_corr(x, 50), ValidationError);
}

TEST(WStatistic, ZeroBracketAndMonotone) {
  const double n = 400, p = 800, r = 0.5;
  const double s = std::sqrt(2.0 * std::log(p));
  const double target = s - (std::log(std::log(p)) + std::log(4 * std::numbers::pi)) / (2 * s);
  const double Ln = (target * (1 - r * r) + r * std::sqrt(n)) / std::sqrt(n);
  EXPECT_NEAR(w_statistic(Ln, n, p, r), 0.0, 1e-12);
  double prev = -1e300;
  for (double L = 0.3; L < 0.9; L += 0.001) {
    const double w = w_statistic(L, n, p, r);
    EXPECT_GT(w, prev);
    prev = w;
  }
  EXPECT_THROW(w_statistic(0.5, n, 2.0, r), DomainError);
}

TEST(WStar, FollowsExactFiniteLaw) {
  const std::size_t p = 250, reps = 20'000;
  const double s = std::sqrt(2.0 * std::log(double(p)));
  const double shift = (std::log(std::log(double(p))) + std::log(4 * std::numbers::pi)) / (2 * s);
  std::vector<double> w(reps);
  for (std::size_t k = 0; k < reps; ++k) w[k] = w_star(p, {77, k});
  std::sort(w.begin(), w.end());
  double ks = 0;
  for (std::size_t k = 0; k < reps; ++k) {
    const double m = w[k] / s + s - shift;
    const double F = std::pow(normal_cdf(m), double(p));
    ks = std::max({ks, std::abs(F - double(k) / reps), std::abs(F - double(k + 1) / reps)});
  }
  EXPECT_LT(ks, 1.63 / std::sqrt(double(reps)));
  EXPECT_EQ(w_star(p, {77, 3}), w_star(p, {77, 3}));
}

TEST(MaxAngle, Examples) {
  ExtremeStat e;
  e.value = 1.0;
  EXPECT_EQ(max_angle(e), 0.0);
  e.value = 0.0;
  EXPECT_DOUBLE_EQ(max_angle(e), std::numbers::pi / 2);
  e.value = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(max_angle(e), std::numbers::pi / 4, 1e-15);
}
