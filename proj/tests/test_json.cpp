#include "maxcorr/error.hpp"
#include "maxcorr/json_io.hpp"
#include "maxcorr/sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace maxcorr;

TEST(LawJson, RoundTrip) {
  const std::vector<LimitLaw> laws{GumbelK{kK1}, CriticalMix{kK1, critical_k2(), -1.5},
                                   NormalGumbelMix{0.75}, StdNormal{}};
  for (const auto& law : laws) {
    const Json j = law_to_json(law);
    const LimitLaw back = law_from_json(Json::parse(j.dump()));
    EXPECT_EQ(law_name(back), law_name(law));
    for (double x : {-2.0, 0.0, 1.0, 3.0}) EXPECT_EQ(cdf(back, x), cdf(law, x));
  }
  const LimitLaw g = law_from_json(Json::parse(R"({"law":"gumbelK","K":0.3535533906})"));
  EXPECT_NEAR(std::get<GumbelK>(g).K, kK1, 1e-10);
  EXPECT_EQ(law_to_json(GumbelK{2.0}).dump(), R"({"law":"gumbelK","K":2.0})");
}

TEST(LawJson, RejectsMalformed) {
  EXPECT_THROW(law_from_json(Json::parse(R"({"law":"weibull","k":1})")), ValidationError);
  EXPECT_THROW(law_from_json(Json::parse(R"({"K":1})")), ValidationError);
  EXPECT_THROW(law_from_json(Json::parse(R"({"law":"gumbelK"})")), ValidationError);
  EXPECT_THROW(law_from_json(Json::parse(R"({"law":"gumbelK","K":-1})")), ValidationError);
  EXPECT_THROW(law_from_json(Json::parse(R"({"law":"gumbelK","K":"one"})")), ValidationError);
}

TEST(SequenceJson, Forms) {
  const auto table = sequence_from_json(Json::parse(R"({"seq":[1.0,0.5,0.25]})"), 99);
  EXPECT_EQ(table.horizon(), 3u);
  EXPECT_EQ(table[2], 0.25);
  const auto lp =
      sequence_from_json(Json::parse(R"({"gen":"logpow","a":0.5,"A":3.0,"eps":0.25})"), 10);
  EXPECT_EQ(lp.horizon(), 10u);
  EXPECT_DOUBLE_EQ(lp[4], 0.5 * std::pow(std::log(7.0), -0.25));
  const auto geo = sequence_from_json(Json::parse(R"({"gen":"geometric","r":0.5})"), 5);
  EXPECT_EQ(geo[3], 0.125);
  EXPECT_THROW(sequence_from_json(Json::parse(R"({"seq":[1,0.5,0.6]})"), 3), ValidationError);
  EXPECT_THROW(sequence_from_json(Json::parse(R"({"gen":"spline"})"), 3), ValidationError);
  EXPECT_THROW(sequence_from_json(Json::parse(R"([1,0.5])"), 3), ValidationError);
}

TEST(OutcomeJson, CarriesAllFields) {
  const Matrix x = sample_ar1(60, 30, 0.5, {1, 0}).matrix();
  const TestOutcome t = ar1_structure_test(x, 0.05);
  const Json j = to_json(t);
  for (const char* key : {"test", "statistic", "critical_value", "normalized", "p_value", "alpha",
                          "reject", "law", "constants", "extreme", "r_hat"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["test"], "ar1");
  EXPECT_EQ(j["r_hat"].get<double>(), *t.r_hat);
  EXPECT_FALSE(to_json(identity_test(x, 0.05)).contains("r_hat"));
}

TEST(ReportJson, RegimeFields) {
  const Json j = to_json(classify_regime(400, 800, 0.0));
  EXPECT_EQ(j["regime"], "subcritical");
  EXPECT_NEAR(j["threshold"].get<double>(), 0.5857864376, 1e-10);
  EXPECT_EQ(j["supported"], true);
}

TEST(ConfigJson, LongSequencesAreTruncated) {
  McConfig cfg;
  cfg.n = 10;
  cfg.p = 100;
  cfg.model = ToeplitzModel{ToeplitzSequence::geometric(0.5, 100)};
  cfg.statistic = StatRaw{};
  const Json j = config_to_json(cfg);
  EXPECT_EQ(j["model"]["horizon"], 100);
  EXPECT_EQ(j["model"]["seq_head"].size(), 16u);
  EXPECT_FALSE(j["model"].contains("seq"));
  EXPECT_EQ(j["statistic"]["name"], "raw");
}
