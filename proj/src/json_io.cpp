#include "maxcorr/json_io.hpp"

#include "maxcorr/error.hpp"

#include <fstream>

namespace maxcorr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ValidationError(std::string("missing numeric field \"") + key + "\"");
  return j.at(key).get<double>();
}

}  // namespace

Json law_to_json(const LimitLaw& law) {
  return std::visit(
      Overloaded{
          [](const GumbelK& g) { return Json{{"law", "gumbelK"}, {"K", g.K}}; },
          [](const CriticalMix& c) {
            return Json{{"law", "criticalMix"}, {"K1", c.K1}, {"K2", c.K2}, {"lambda", c.lambda}};
          },
          [](const NormalGumbelMix& m) {
            return Json{{"law", "normalGumbelMix"}, {"gamma0", m.gamma0}};
          },
          [](const StdNormal&) { return Json{{"law", "stdNormal"}}; },
      },
      law);
}

LimitLaw law_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("law") || !j.at("law").is_string())
    throw ValidationError("law JSON needs a \"law\" string field");
  const auto name = j.at("law").get<std::string>();
  LimitLaw law;
  if (name == "gumbelK")
    law = GumbelK{number(j, "K")};
  else if (name == "criticalMix")
    law = CriticalMix{number(j, "K1"), number(j, "K2"), number(j, "lambda")};
  else if (name == "normalGumbelMix")
    law = NormalGumbelMix{number(j, "gamma0")};
  else if (name == "stdNormal")
    law = StdNormal{};
  else
    throw ValidationError("unknown law \"" + name + "\"");
  validate_law(law);
  return law;
}

ToeplitzSequence sequence_from_json(const Json& j, std::size_t horizon) {
  if (!j.is_object()) throw ValidationError("sequence JSON must be an object");
  if (j.contains("seq")) {
    if (!j.at("seq").is_array()) throw ValidationError("\"seq\" must be an array");
    std::vector<double> v;
    for (const auto& e : j.at("seq")) {
      if (!e.is_number()) throw ValidationError("\"seq\" entries must be numbers");
      v.push_back(e.get<double>());
    }
    return ToeplitzSequence(std::move(v));
  }
  if (!j.contains("gen") || !j.at("gen").is_string())
    throw ValidationError("sequence JSON needs \"seq\" or \"gen\"");
  const auto gen = j.at("gen").get<std::string>();
  if (gen == "logpow")
    return ToeplitzSequence::logpow(number(j, "a"), number(j, "A"), number(j, "eps"), horizon);
  if (gen == "geometric") return ToeplitzSequence::geometric(number(j, "r"), horizon);
  throw ValidationError("unknown sequence generator \"" + gen + "\"");
}

Json to_json(const NormConstants& c) {
  return {{"multiplier", c.multiplier}, {"offset", c.offset}, {"source", to_string(c.source)}};
}

Json to_json(const RegimeReport& r) {
  return {{"n", r.n},         {"p", r.p},
          {"r", r.r},         {"L", r.L},
          {"kappa", r.kappa}, {"lambda", r.lambda},
          {"regime", to_string(r.regime)}, {"supported", r.supported},
          {"threshold", r.threshold}};
}

Json to_json(const ExtremeStat& e) {
  return {{"value", e.value}, {"i", e.i}, {"j", e.j}, {"kind", to_string(e.kind)},
          {"n", e.n},         {"p", e.p}};
}

Json to_json(const TestOutcome& t) {
  Json j{{"test", to_string(t.test)},
         {"statistic", t.statistic},
         {"critical_value", t.critical_value},
         {"normalized", t.normalized},
         {"p_value", t.p_value},
         {"alpha", t.alpha},
         {"reject", t.reject},
         {"law", law_to_json(t.law)},
         {"constants", to_json(t.constants)},
         {"extreme", to_json(t.extreme)}};
  if (t.r_hat) j["r_hat"] = *t.r_hat;
  return j;
}

Json to_json(const CovarianceModel& m) {
  if (const auto* ar = std::get_if<Ar1Model>(&m)) return {{"model", "ar1"}, {"r", ar->r}};
  const auto v = std::get<ToeplitzModel>(m).seq.values();
  return {{"model", "toeplitz"}, {"seq", std::vector<double>(v.begin(), v.end())}};
}

Json config_to_json(const McConfig& cfg) {
  Json stat{{"name", statistic_name(cfg.statistic)}};
  std::visit(Overloaded{
                 [&](const StatWn& s) { stat["r"] = s.r; },
                 [&](const StatNormalized& s) { stat["constants"] = to_json(s.constants); },
                 [](const StatRaw&) {},
                 [](const StatWstar&) {},
                 [&](const StatCltToeplitz& s) {
                   stat["r1"] = s.r1;
                   stat["f"] = s.f;
                 },
             },
             cfg.statistic);
  Json model = to_json(cfg.model);
  // The full table can be thousands of entries; the echo keeps the head.
  if (model.contains("seq") && model["seq"].size() > 16) {
    model["horizon"] = model["seq"].size();
    Json head = Json::array();
    for (std::size_t k = 0; k < 16; ++k) head.push_back(model["seq"][k]);
    model["seq_head"] = head;
    model.erase("seq");
  }
  return {{"n", cfg.n},       {"p", cfg.p},           {"model", model},
          {"reps", cfg.reps}, {"seed", cfg.seed},     {"statistic", stat},
          {"workers", cfg.workers}, {"centered", cfg.centered}};
}

Json summary_to_json(const McSummary& s) {
  Json j{{"config", config_to_json(s.config)}, {"reps", s.values.size()}};
  if (s.ks)
    j["ks"] = {{"distance", s.ks->distance}, {"reference", law_to_json(s.ks->reference)}};
  else
    j["ks"] = nullptr;
  j["median"] = empirical_quantile(s.sorted, 0.5);
  j["min"] = s.sorted.front();
  j["max"] = s.sorted.back();
  j["runtime_seconds"] = s.seconds;
  return j;
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace maxcorr
