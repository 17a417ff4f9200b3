#pragma once

// JSON forms of laws, constants, reports and summaries.

#include "maxcorr/covariance.hpp"
#include "maxcorr/hyptest.hpp"
#include "maxcorr/limits.hpp"
#include "maxcorr/montecarlo.hpp"
#include "maxcorr/stats.hpp"

#include <json.hpp>

#include <filesystem>

namespace maxcorr {

using Json = nlohmann::ordered_json;

/// {"law":"gumbelK","K":...}, {"law":"criticalMix","K1":..,"K2":..,"lambda":..},
/// {"law":"normalGumbelMix","gamma0":..}, {"law":"stdNormal"}.
Json law_to_json(const LimitLaw& law);
/// Throws ValidationError for unknown or malformed laws.
LimitLaw law_from_json(const Json& j);

/// {"seq":[1, r1, ...]} or {"gen":"logpow","a":..,"A":..,"eps":..} or
/// {"gen":"geometric","r":..}. Generated sequences get `horizon` lags.
ToeplitzSequence sequence_from_json(const Json& j, std::size_t horizon);

Json to_json(const NormConstants& c);
Json to_json(const RegimeReport& r);
Json to_json(const ExtremeStat& e);
Json to_json(const TestOutcome& t);
Json to_json(const CovarianceModel& m);
Json config_to_json(const McConfig& cfg);
Json summary_to_json(const McSummary& s);

void write_json(const Json& j, const std::filesystem::path& path);

}  // namespace maxcorr
