#include "maxcorr/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace maxcorr;

// Known-answer vectors published with Random123 (kat_vectors, philox4x32 R=10).
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(OpenUniform, StaysInsideUnitInterval) {
  EXPECT_GT(open_uniform(0), 0.0);
  EXPECT_LT(open_uniform(~std::uint64_t{0}), 1.0);
  EXPECT_TRUE(std::isfinite(normal_quantile(open_uniform(~std::uint64_t{0}))));
  EXPECT_TRUE(std::isfinite(normal_quantile(open_uniform(0))));
}

TEST(NormalQuantile, ReferenceValues) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-9);
}

TEST(NormalQuantile, InvertsCdf) {
  for (double u = 0.0005; u < 1.0; u += 0.0005)
    EXPECT_NEAR(normal_cdf(normal_quantile(u)), u, 1e-13) << u;
}

TEST(Streams, PureFunctionOfAddress) {
  const StreamSeed s{42, 7};
  EXPECT_EQ(uniform_pair(s, StreamTag::kSample, 3, 5), uniform_pair(s, StreamTag::kSample, 3, 5));
  EXPECT_NE(uniform_pair(s, StreamTag::kSample, 3, 5), uniform_pair(s, StreamTag::kMaxima, 3, 5));
  EXPECT_NE(uniform_pair(s, StreamTag::kSample, 3, 5), uniform_pair(s, StreamTag::kSample, 4, 5));
  EXPECT_NE(uniform_pair(s, StreamTag::kSample, 3, 5),
            uniform_pair(StreamSeed{42, 8}, StreamTag::kSample, 3, 5));
  EXPECT_NE(uniform_pair(s, StreamTag::kSample, 3, 5),
            uniform_pair(StreamSeed{43, 7}, StreamTag::kSample, 3, 5));
}

TEST(Streams, RowPrefixDoesNotDependOnLength) {
  std::vector<double> a(7), b(8);
  fill_normal_row({1, 2}, StreamTag::kSample, 9, a);
  fill_normal_row({1, 2}, StreamTag::kSample, 9, b);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(a[j], b[j]);
}

TEST(Streams, NormalMoments) {
  const std::size_t rows = 2000, cols = 50;
  std::vector<double> buf(cols);
  double sum = 0, sum2 = 0, sum4 = 0;
  for (std::uint32_t r = 0; r < rows; ++r) {
    fill_normal_row({5, 0}, StreamTag::kSample, r, buf);
    for (double v : buf) {
      sum += v;
      sum2 += v * v;
      sum4 += v * v * v * v;
    }
  }
  const double m = static_cast<double>(rows * cols);
  EXPECT_NEAR(sum / m, 0.0, 4.0 / std::sqrt(m));
  EXPECT_NEAR(sum2 / m, 1.0, 4.0 * std::sqrt(2.0 / m));
  EXPECT_NEAR(sum4 / m, 3.0, 4.0 * std::sqrt(96.0 / m));
}
