#include "maxcorr/covariance.hpp"
#include "maxcorr/error.hpp"
#include "maxcorr/montecarlo.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

using namespace maxcorr;

namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

// E[(v'Av)(w'Bw)] for jointly normal (v, w) with zero mean:
// tr(A S11) tr(B S22) + 2 tr(A S12 B S21).
double quad_product_moment(const Mat2& A, const Mat2& B, const Mat2& S11, const Mat2& S22,
                           const Mat2& S12) {
  auto tr_prod = [](const Mat2& X, const Mat2& Y) {
    double t = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) t += X[a][b] * Y[b][a];
    return t;
  };
  Mat2 S21{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) S21[a][b] = S12[b][a];
  Mat2 AS12{}, BS21{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        AS12[a][b] += A[a][c] * S12[c][b];
        BS21[a][b] += B[a][c] * S21[c][b];
      }
  return tr_prod(A, S11) * tr_prod(B, S22) + 2.0 * tr_prod(AS12, BS21);
}

double corr(const ToeplitzSequence& seq, std::size_t a, std::size_t b) {
  return seq[a > b ? a - b : b - a];
}

// Q_{i,i+s} = (x_i x_{i+s} - r1 (x_i^2 + x_{i+s}^2)/2) / (1 - r1^2).
double q_cov_oracle(const ToeplitzSequence& seq, std::size_t i, std::size_t s, std::size_t j,
                    std::size_t t) {
  const double r1 = seq[1];
  const double c = 1.0 / (1.0 - r1 * r1);
  const Mat2 A{{{-0.5 * r1 * c, 0.5 * c}, {0.5 * c, -0.5 * r1 * c}}};
  const std::array<std::size_t, 2> v{i, i + s}, w{j, j + t};
  Mat2 S11{}, S22{}, S12{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      S11[a][b] = corr(seq, v[a], v[b]);
      S22[a][b] = corr(seq, w[a], w[b]);
      S12[a][b] = corr(seq, v[a], w[b]);
    }
  return quad_product_moment(A, A, S11, S22, S12);
}

// S(i,j) for AR(1) as a quadratic form, covariance via the same identity.
double s_moment_oracle(double r, std::size_t i, std::size_t li, std::size_t j, std::size_t lj) {
  const auto seq = ToeplitzSequence::geometric(r, 64);
  const double ci = std::pow(r, static_cast<double>(li));
  const double cj = std::pow(r, static_cast<double>(lj));
  const Mat2 A{{{-0.5 * ci, 0.5}, {0.5, -0.5 * ci}}};
  const Mat2 B{{{-0.5 * cj, 0.5}, {0.5, -0.5 * cj}}};
  const std::array<std::size_t, 2> v{i, i + li}, w{j, j + lj};
  Mat2 S11{}, S22{}, S12{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      S11[a][b] = corr(seq, v[a], v[b]);
      S22[a][b] = corr(seq, w[a], w[b]);
      S12[a][b] = corr(seq, v[a], w[b]);
    }
  return quad_product_moment(A, B, S11, S22, S12);
}

ToeplitzSequence example2(std::size_t horizon) {
  return ToeplitzSequence::logpow(0.5, 3.0, 0.0, horizon);
}

}  // namespace

TEST(BuildMatrix, Examples) {
  EXPECT_EQ(build_matrix(Ar1Model{0.0}, 3), Matrix::identity(3));

  const Matrix m = build_matrix(Ar1Model{0.5}, 3);
  const double want[3][3] = {{1, 0.5, 0.25}, {0.5, 1, 0.5}, {0.25, 0.5, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(m(i, j), want[i][j]);

  const Matrix t = build_matrix(ToeplitzModel{ToeplitzSequence({1, 0.5, 0.5, 0.1})}, 4);
  const double tw[4][4] = {{1, .5, .5, .1}, {.5, 1, .5, .5}, {.5, .5, 1, .5}, {.1, .5, .5, 1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(t(i, j), tw[i][j]);
}

TEST(BuildMatrix, RejectsInvalidModels) {
  EXPECT_THROW(build_matrix(Ar1Model{1.0}, 3), ValidationError);
  EXPECT_THROW(build_matrix(Ar1Model{-0.1}, 3), ValidationError);
  EXPECT_THROW(ToeplitzSequence({1, 0.5, 0.6}), ValidationError);
  EXPECT_THROW(ToeplitzSequence({0.9, 0.5}), ValidationError);
  EXPECT_THROW(build_matrix(ToeplitzModel{ToeplitzSequence({1, 0.5})}, 3), ValidationError);
}

TEST(BuildMatrix, SymmetricWithUnitDiagonal) {
  for (const CovarianceModel& model :
       {CovarianceModel{Ar1Model{0.3}}, CovarianceModel{Ar1Model{0.95}},
        CovarianceModel{ToeplitzModel{example2(40)}}}) {
    const Matrix m = build_matrix(model, 40);
    for (std::size_t i = 0; i < 40; ++i) {
      EXPECT_EQ(m(i, i), 1.0);
      for (std::size_t j = 0; j < 40; ++j) EXPECT_EQ(m(i, j), m(j, i));
    }
  }
}

TEST(ValidatePd, Examples) {
  EXPECT_TRUE(validate_pd(Matrix::identity(5), 1e-10).passed);
  EXPECT_TRUE(validate_pd(build_matrix(Ar1Model{0.99}, 50)).passed);
  const PdReport ones = validate_pd(Matrix(3, 3, 1.0));
  EXPECT_FALSE(ones.passed);
  EXPECT_EQ(ones.pivot_index, 1u);
  EXPECT_FALSE(ones.diagnostic.empty());
}

TEST(ValidatePd, NonSymmetricIsContractViolation) {
  Matrix m = Matrix::identity(3);
  m(0, 1) = 0.2;
  EXPECT_THROW(validate_pd(m), ContractViolation);
}

TEST(ValidatePd, Ar1AlwaysPositiveDefinite) {
  for (std::size_t p : {2, 17, 128, 512})
    for (double r : {0.0, 0.5, 0.9, 0.999})
      EXPECT_TRUE(validate_pd(build_matrix(Ar1Model{r}, p)).passed) << p << " " << r;
}

TEST(Polya, Examples) {
  const auto harmonic =
      ToeplitzSequence::from_function([](std::size_t k) { return 1.0 / (k + 1.0); }, 101);
  EXPECT_EQ(polya_check(harmonic, 100).verdict, PolyaVerdict::kPass);
  EXPECT_EQ(polya_check(example2(101), 100).verdict, PolyaVerdict::kPass);
  const PolyaReport bad = polya_check(ToeplitzSequence({1, 0.9, 0.9, 0.1}), 3);
  EXPECT_EQ(bad.verdict, PolyaVerdict::kInconclusive);
  EXPECT_EQ(bad.offending_lag, 2u);
}

TEST(Polya, PassImpliesPositiveDefinite) {
  const std::vector<ToeplitzSequence> seqs{
      example2(257), ToeplitzSequence::geometric(0.7, 257),
      ToeplitzSequence::from_function([](std::size_t k) { return 1.0 / (k + 1.0); }, 257),
      ToeplitzSequence::from_function([](std::size_t k) { return 1.0 / std::sqrt(k + 1.0); },
                                      257)};
  for (const auto& seq : seqs)
    for (std::size_t p : {8, 64, 256}) {
      ASSERT_EQ(polya_check(seq, p).verdict, PolyaVerdict::kPass);
      EXPECT_TRUE(validate_pd(build_matrix(ToeplitzModel{seq}, p)).passed) << p;
    }
}

TEST(GapIndex, Examples) {
  EXPECT_EQ(gap_index(ToeplitzSequence::geometric(0.5, 10)).d, 1u);
  EXPECT_EQ(gap_index(ToeplitzSequence({1, 0.5, 0.5, 0.5, 0.2, 0.1})).d, 3u);
  std::vector<double> flat(100, 0.5);
  flat[0] = 1.0;
  EXPECT_THROW(gap_index(ToeplitzSequence(flat)), ValidationError);
}

TEST(SVar, Examples) {
  EXPECT_EQ(s_var(0.0, 1), 1.0);
  EXPECT_DOUBLE_EQ(s_var(0.5, 1), 0.5625);
  EXPECT_DOUBLE_EQ(s_var(0.5, 2), 0.87890625);
}

TEST(SVar, MatchesIsserlis) {
  for (double r : {0.0, 0.2, 0.5, 0.8, 0.95})
    for (std::size_t lag = 1; lag <= 6; ++lag)
      EXPECT_NEAR(s_var(r, lag), s_moment_oracle(r, 3, lag, 3, lag), 1e-14) << r << " " << lag;
}

TEST(SCovAdjacent, Examples) {
  EXPECT_EQ(s_cov_adjacent(0.0, 4), 0.0);
  EXPECT_DOUBLE_EQ(s_cov_adjacent(0.5, 1), 0.0703125);
  EXPECT_DOUBLE_EQ(s_cov_adjacent(0.5, 2), 0.017578125);
}

TEST(SCovAdjacent, MatchesIsserlisAndGeometricForm) {
  for (double r : {0.2, 0.5, 0.8})
    for (std::size_t k = 1; k <= 12; ++k) {
      EXPECT_NEAR(s_cov_adjacent(r, k), s_moment_oracle(r, 2, 1, 2 + k, 1), 1e-14);
      const double g = (1 - r * r) * (1 - r * r) * 0.5 * std::pow(r, 2.0 * k);
      EXPECT_NEAR(s_cov_adjacent(r, k) / g, 1.0, 1e-14);
    }
}

TEST(SMoments, MonteCarloAgrees) {
  const SMoments m = estimate_s_moments(0.5, 2, 2, 100'000, 16, 11, 2);
  EXPECT_NEAR(m.var[0], s_var(0.5, 1), 0.01);
  EXPECT_NEAR(m.var[1], s_var(0.5, 2), 0.01);
  EXPECT_NEAR(m.adj[0], s_cov_adjacent(0.5, 1), 0.01);
  EXPECT_NEAR(m.adj[1], s_cov_adjacent(0.5, 2), 0.01);
}

TEST(FSeq, ZeroLagIsOne) {
  EXPECT_EQ(f_seq(example2(10), 0), 1.0);
  EXPECT_EQ(f_seq(ToeplitzSequence::geometric(0.5, 10), 0), 1.0);
}

TEST(FSeq, GeometricClosedForm) {
  for (double r : {0.2, 0.5, 0.8}) {
    const auto seq = ToeplitzSequence::geometric(r, 60);
    for (std::size_t k = 1; k <= 50; ++k)
      EXPECT_NEAR(f_seq(seq, k), 0.5 * std::pow(r, 2.0 * k), 1e-14) << r << " " << k;
  }
}

TEST(QCov, MatchesTraceOracle) {
  const auto seq = example2(64);
  for (std::size_t i : {1, 4, 9})
    for (std::size_t j : {1, 2, 5, 20}) {
      EXPECT_NEAR(q_cov(seq, GapIndex{1}, i, 1, j, 1), q_cov_oracle(seq, i, 1, j, 1), 1e-13);
    }
  const ToeplitzSequence flat({1, 0.6, 0.6, 0.6, 0.3, 0.2, 0.1, 0.05, 0.0, 0.0, 0.0, 0.0, 0.0,
                               0.0, 0.0, 0.0});
  const GapIndex d = gap_index(flat);
  ASSERT_EQ(d.d, 3u);
  for (std::size_t s = 1; s <= 3; ++s)
    for (std::size_t t = 1; t <= 3; ++t)
      for (std::size_t j : {1, 2, 4, 7}) {
        EXPECT_NEAR(q_cov(flat, d, 2, s, j, t), q_cov_oracle(flat, 2, s, j, t), 1e-13);
        EXPECT_NEAR(q_cov(flat, d, 2, s, j, t), q_cov(flat, d, j, t, 2, s), 1e-15);
      }
}

TEST(QCov, UnitVarianceAndIndependence) {
  const auto seq = example2(40);
  EXPECT_NEAR(q_cov(seq, GapIndex{1}, 5, 1, 5, 1), 1.0, 1e-13);
  std::vector<double> indep(40, 0.0);
  indep[0] = 1.0;
  EXPECT_EQ(q_cov(ToeplitzSequence(indep), GapIndex{1}, 1, 1, 20, 1), 0.0);
}

TEST(QCov, AdjacentEqualsFSeq) {
  const std::vector<ToeplitzSequence> seqs{
      ToeplitzSequence::geometric(0.2, 210), ToeplitzSequence::geometric(0.5, 210),
      ToeplitzSequence::geometric(0.8, 210), example2(210),
      ToeplitzSequence::logpow(1.0, 2.0, 0.25, 210)};
  for (const auto& seq : seqs)
    for (std::size_t k = 1; k <= 200; ++k)
      EXPECT_NEAR(q_cov(seq, GapIndex{1}, 3, 1, 3 + k, 1), f_seq(seq, k), 1e-12) << k;
}

TEST(QCov, OffsetsOutsideBandAreContractViolations) {
  const auto seq = example2(20);
  EXPECT_THROW(q_cov(seq, GapIndex{1}, 1, 0, 3, 1), ContractViolation);
  EXPECT_THROW(q_cov(seq, GapIndex{1}, 1, 2, 3, 1), ContractViolation);
  EXPECT_THROW(q_cov(seq, GapIndex{1}, 1, 1, 3, 2), ContractViolation);
}

TEST(FConditions, SlowlyDecayingSequencePasses) {
  const auto seq = ToeplitzSequence::logpow(1.0, 2.0, 0.25, 3000);
  EXPECT_TRUE(scan_f_conditions(seq, 1, 100).ok());
  EXPECT_TRUE(scan_f_conditions(seq, 10, 2990).ok());
}

TEST(FConditions, GeometricFailsLogCondition) {
  const auto scan = scan_f_conditions(ToeplitzSequence::geometric(0.5, 100), 2, 90);
  EXPECT_FALSE(scan.first_increase.has_value());
  ASSERT_TRUE(scan.first_flog_decrease.has_value());
  EXPECT_EQ(*scan.first_flog_decrease, 2u);
}
