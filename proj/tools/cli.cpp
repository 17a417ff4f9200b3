#include "cli.hpp"

#include "maxcorr/covariance.hpp"
#include "maxcorr/error.hpp"
#include "maxcorr/hyptest.hpp"
#include "maxcorr/json_io.hpp"
#include "maxcorr/limits.hpp"
#include "maxcorr/montecarlo.hpp"
#include "maxcorr/sampler.hpp"
#include "maxcorr/stats.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace maxcorr::cli {
namespace {

namespace fs = std::filesystem;

struct ModelFlags {
  std::string model = "ar1";
  double r = 0.0;
  std::string seq_file;
  std::string seq_json;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--model", f.model, "ar1 or toeplitz")->check(CLI::IsMember({"ar1", "toeplitz"}));
  cmd->add_option("--r", f.r, "AR(1) parameter");
  cmd->add_option("--seq-file", f.seq_file, "Toeplitz sequence JSON file");
  cmd->add_option("--seq-json", f.seq_json, "Toeplitz sequence JSON text");
}

ToeplitzSequence load_sequence(const ModelFlags& f, std::size_t horizon) {
  Json j;
  try {
    if (!f.seq_json.empty()) {
      j = Json::parse(f.seq_json);
    } else if (!f.seq_file.empty()) {
      std::ifstream in(f.seq_file);
      if (!in) throw ValidationError("cannot read " + f.seq_file);
      j = Json::parse(in);
    } else {
      throw ValidationError("toeplitz model needs --seq-file or --seq-json");
    }
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("sequence JSON: ") + e.what());
  }
  return sequence_from_json(j, horizon);
}

// Toeplitz tables get p + 2 lags so r_p and f(p-1) are available.
CovarianceModel make_model(const ModelFlags& f, std::size_t p) {
  if (f.model == "ar1") {
    validate_model(Ar1Model{f.r}, std::max<std::size_t>(p, 2));
    return Ar1Model{f.r};
  }
  return ToeplitzModel{load_sequence(f, p + 2)};
}

ToeplitzSequence as_sequence(const CovarianceModel& m, std::size_t horizon) {
  if (const auto* ar = std::get_if<Ar1Model>(&m)) return ToeplitzSequence::geometric(ar->r, horizon);
  return std::get<ToeplitzModel>(m).seq;
}

std::uint64_t resolve_seed(std::uint64_t flag, bool env_seed) {
  if (!env_seed) return flag;
  const char* env = std::getenv("EC_SEED");
  if (!env || !*env) return flag;
  std::uint64_t v = 0;
  const char* end = env + std::strlen(env);
  const auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end) throw ValidationError("EC_SEED is not an unsigned integer");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << body;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& args, std::uint64_t seed, const Json& config,
                    const std::vector<std::string>& outputs, double seconds) {
  Json m{{"tool", "maxcorr"},
         {"version", MAXCORR_VERSION},
         {"command", command},
         {"args", args},
         {"seed", seed},
         {"config", config},
         {"outputs", outputs},
         {"timings", {{"wall_seconds", seconds}}}};
  write_json(m, dir / "manifest.json");
}

Matrix read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::vector<double> data;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t count = 0, start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start);
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cell = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw ValidationError("CSV line " + std::to_string(line_no) + ", field " +
                              std::to_string(count + 1) + ": not a number");
      data.push_back(v);
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (rows == 0) cols = count;
    if (count != cols)
      throw ValidationError("CSV line " + std::to_string(line_no) + " has " +
                            std::to_string(count) + " fields, expected " + std::to_string(cols));
    ++rows;
  }
  if (rows == 0) throw ValidationError("CSV file is empty");
  Matrix m(rows, cols);
  std::copy(data.begin(), data.end(), m.data());
  return m;
}

void write_csv(const Matrix& m, const fs::path& path) {
  std::string body;
  for (std::size_t k = 0; k < m.rows(); ++k) {
    for (std::size_t j = 0; j < m.cols(); ++j) body += (j ? "," : "") + fmt(m(k, j));
    body += "\n";
  }
  write_text(path, body);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- simulate

struct Preset {
  std::size_t n, p;
};

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table{
      {"fig1-left", {100, 250}},  {"fig1-right", {250, 500}}, {"fig2-left", {400, 800}},
      {"fig2-right", {2000, 800}}, {"fig3-left", {100, 250}},  {"fig3-right", {250, 500}},
      {"fig4-left", {400, 800}},  {"fig4-right", {2000, 800}}, {"fast", {400, 400}},
  };
  return table;
}

struct SimulateFlags {
  std::size_t n = 0, p = 0, reps = 400, bins = 0, qq_grid = 99;
  ModelFlags model;
  std::string stat = "wn";
  std::string preset;
  std::uint64_t seed = 20240601;
  int workers = 1;
  bool centered = false;
  bool compare_wstar = false;
  bool dry_run = false;
  std::string out = ".";
};

int cmd_simulate(SimulateFlags f, CLI::App* cmd, const std::vector<std::string>& args,
                 bool env_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!f.preset.empty()) {
    const auto& P = presets().at(f.preset);
    if (cmd->count("--n") == 0) f.n = P.n;
    if (cmd->count("--p") == 0) f.p = P.p;
    if (cmd->count("--r") == 0) f.model.r = 0.5;
    if (cmd->count("--reps") == 0) f.reps = f.preset == "fast" ? 200 : 400;
    if (cmd->count("--stat") == 0) f.stat = "wn";
    f.compare_wstar = f.compare_wstar || f.preset != "fast";
  }
  if (f.n == 0 && f.stat != "wstar") throw ValidationError("--n is required");
  if (f.p == 0) throw ValidationError("--p is required");

  McConfig cfg;
  cfg.n = f.n;
  cfg.p = f.p;
  cfg.reps = f.reps;
  cfg.seed = resolve_seed(f.seed, env_seed);
  cfg.workers = f.workers;
  cfg.centered = f.centered;
  cfg.model = make_model(f.model, f.p);
  RunOptions opts;
  opts.bins = f.bins;
  opts.qq_grid = f.qq_grid;

  const double n = static_cast<double>(f.n), p = static_cast<double>(f.p);
  const bool ar1 = std::holds_alternative<Ar1Model>(cfg.model);
  if (f.stat == "wn") {
    double r = ar1 ? std::get<Ar1Model>(cfg.model).r : model_correlation(cfg.model, 1);
    if (!ar1 && cmd->count("--r") > 0) r = f.model.r;
    cfg.statistic = StatWn{r};
  } else if (f.stat == "norm") {
    LimitPair lp;
    if (ar1) {
      lp = limit_for_regime(classify_regime(n, p, std::get<Ar1Model>(cfg.model).r));
    } else {
      const auto& seq = std::get<ToeplitzModel>(cfg.model).seq;
      lp = limit_for_toeplitz(n, p, gap_index(seq), seq[1], gamma_plugin(seq, f.p));
    }
    cfg.statistic = StatNormalized{lp.constants};
    opts.reference = lp.law;
  } else if (f.stat == "raw") {
    cfg.statistic = StatRaw{};
  } else if (f.stat == "wstar") {
    cfg.statistic = StatWstar{};
  } else {
    const auto seq = as_sequence(cfg.model, f.p + 2);
    cfg.statistic = StatCltToeplitz{seq[1], f_seq(seq, f.p - 1)};
  }

  if (f.dry_run) {
    Json j = config_to_json(cfg);
    j["compare_wstar"] = f.compare_wstar;
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  const McSummary s = run(cfg, opts);
  const fs::path out(f.out);
  fs::create_directories(out);
  write_values_csv(s, out / "values.csv");
  write_qq_csv(s, out / "qq.csv");
  write_hist_csv(s, out / "hist.csv");
  std::vector<std::string> outputs{"values.csv", "qq.csv", "hist.csv", "summary.json"};
  Json summary = summary_to_json(s);

  if (f.compare_wstar && f.stat != "wstar") {
    McConfig wc = cfg;
    wc.statistic = StatWstar{};
    const McSummary w = run(wc, {});
    write_values_csv(w, out / "wstar_values.csv");
    std::string body = "statistic,wstar\n";
    for (const auto& q : qq_pairs(s.sorted, w.sorted, f.qq_grid))
      body += fmt(q.empirical) + "," + fmt(q.reference) + "\n";
    write_text(out / "qq_wstar.csv", body);
    summary["wstar"] = {{"median", empirical_quantile(w.sorted, 0.5)},
                        {"median_shift",
                         empirical_quantile(s.sorted, 0.5) - empirical_quantile(w.sorted, 0.5)},
                        {"ks_two_sample", ks_two_sample(s.sorted, w.sorted)}};
    outputs.insert(outputs.end(), {"wstar_values.csv", "qq_wstar.csv"});
  }
  write_json(summary, out / "summary.json");
  write_manifest(out, "simulate", args, cfg.seed, config_to_json(cfg), outputs, seconds_since(t0));

  std::cout << "simulate: " << s.values.size() << " replicates of " << statistic_name(cfg.statistic)
            << " written to " << out.string();
  if (s.ks) std::cout << " (KS " << s.ks->distance << " vs " << law_name(s.ks->reference) << ")";
  std::cout << "\n";
  return kOk;
}

// ---------------------------------------------------------------- test

struct TestFlags {
  std::string test = "identity";
  double alpha = 0.05;
  std::string data;
  bool generate = false;
  std::size_t n = 0, p = 0;
  ModelFlags model;
  std::uint64_t seed = 20240601;
  bool uncentered = false;
  std::string dump;
  std::string out = ".";
};

int cmd_test(const TestFlags& f, const std::vector<std::string>& args, bool env_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  if (f.data.empty() == !f.generate)
    throw ValidationError("give exactly one of --data or --generate");
  Json config{{"test", f.test}, {"alpha", f.alpha}};
  std::uint64_t seed = 0;
  Matrix x;
  if (f.generate) {
    if (f.n == 0 || f.p == 0) throw ValidationError("--generate needs --n and --p");
    seed = resolve_seed(f.seed, env_seed);
    x = ModelSampler(make_model(f.model, f.p), f.p)(f.n, StreamSeed{seed, 0}).matrix();
    config["generate"] = {{"n", f.n}, {"p", f.p}, {"model", f.model.model}, {"r", f.model.r}};
    if (!f.dump.empty()) write_csv(x, f.dump);
  } else {
    x = SampleMatrix(read_csv(f.data)).matrix();
    config["data"] = f.data;
  }
  const TestOutcome t = f.test == "identity"
                            ? identity_test(x, f.alpha, IdentityTestOptions{!f.uncentered, {}})
                            : ar1_structure_test(x, f.alpha);
  const Json j = to_json(t);
  std::cerr << to_string(t.test) << " test: " << (t.reject ? "reject" : "do not reject")
            << " H0 at alpha " << t.alpha << " (statistic " << t.statistic << ", critical "
            << t.critical_value << ", p-value " << t.p_value << ")\n";
  std::cout << j.dump(2) << "\n";
  const fs::path out(f.out);
  fs::create_directories(out);
  write_json(j, out / "outcome.json");
  write_manifest(out, "test", args, seed, config, {"outcome.json"}, seconds_since(t0));
  return kOk;
}

// ---------------------------------------------------------------- limits

struct LimitsFlags {
  double n = 0, p = 0, r = 0;
  bool toeplitz = false;
  ModelFlags model;
  std::optional<double> gamma;
  std::string grid;
  RegimeOptions regime;
  std::string out = ".";
};

std::vector<double> parse_grid(const std::string& g) {
  double lo = 0, hi = 0;
  std::size_t steps = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(g);
  if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || steps < 2 || !(hi > lo) ||
      !(in >> std::ws).eof())
    throw ValidationError("--grid expects lo:hi:steps with lo < hi and steps >= 2");
  std::vector<double> xs(steps);
  for (std::size_t k = 0; k < steps; ++k)
    xs[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
  return xs;
}

int cmd_limits(const LimitsFlags& f, const std::vector<std::string>& args) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(f.n >= 3) || !(f.p >= 3)) throw ValidationError("--n and --p must be at least 3");
  Json j;
  LimitLaw law;
  int code = kOk;
  if (f.toeplitz) {
    ModelFlags m = f.model;
    m.model = "toeplitz";
    const auto p = static_cast<std::size_t>(f.p);
    const auto seq = load_sequence(m, p + 2);
    const GapIndex d = gap_index(seq);
    const double gamma = f.gamma.value_or(gamma_plugin(seq, p));
    const LimitPair lp = limit_for_toeplitz(f.n, f.p, d, seq[1], gamma);
    law = lp.law;
    j["toeplitz"] = {{"d", d.d}, {"r1", seq[1]}, {"gamma", gamma}, {"f_pminus1", f_seq(seq, p - 1)}};
    j["constants"] = to_json(lp.constants);
    j["law"] = law_to_json(lp.law);
  } else {
    const RegimeReport rep = classify_regime(f.n, f.p, f.r, f.regime);
    j["regime"] = to_json(rep);
    if (rep.supported) {
      const LimitPair lp = limit_for_regime(rep);
      law = lp.law;
      j["constants"] = to_json(lp.constants);
      j["law"] = law_to_json(lp.law);
    } else {
      j["constants"] = nullptr;
      j["law"] = nullptr;
      j["error"] = "unsupported regime";
      code = kCheckFailed;
    }
  }
  if (!f.grid.empty() && code == kOk) {
    Json rows = Json::array();
    for (double x : parse_grid(f.grid)) rows.push_back({x, cdf(law, x)});
    j["grid"] = rows;
  }
  std::cout << j.dump(2) << "\n";
  const fs::path out(f.out);
  fs::create_directories(out);
  write_json(j, out / "limits.json");
  write_manifest(out, "limits", args, 0, {{"n", f.n}, {"p", f.p}, {"r", f.r}}, {"limits.json"},
                 seconds_since(t0));
  return code;
}

// ---------------------------------------------------------------- covcheck

struct CovcheckFlags {
  ModelFlags model;
  std::size_t p = 200;
  std::size_t kmax = 50;
  std::size_t draws = 1'000'000;
  std::size_t mc_len = 32;
  double mc_tol = 0.005;
  std::uint64_t seed = 20240601;
  int workers = 1;
  std::string out = ".";
};

struct CheckLog {
  Json checks = Json::array();
  bool failed = false;

  void add(const std::string& name, bool pass, const std::string& detail, bool gating = true) {
    const char* tag = pass ? "PASS" : (gating ? "FAIL" : "INFO");
    std::cout << tag << " " << name << ": " << detail << "\n";
    checks.push_back({{"check", name}, {"pass", pass}, {"gating", gating}, {"detail", detail}});
    if (gating && !pass) failed = true;
  }
};

// Raw table checks so a corrupted sequence is reported, not rejected as input.
bool check_table(CheckLog& log, const std::vector<double>& v) {
  if (v.empty() || v[0] != 1.0) {
    log.add("sequence", false, "r_0 must equal 1");
    return false;
  }
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] >= 0.0 && v[k] <= 1.0)) {
      log.add("sequence", false, "r_k outside [0,1] at k=" + std::to_string(k));
      return false;
    }
    if (v[k] > v[k - 1]) {
      log.add("sequence", false, "sequence increases at k=" + std::to_string(k));
      return false;
    }
  }
  log.add("sequence", true, "r_0 = 1, non-increasing, within [0,1]");
  return true;
}

int cmd_covcheck(const CovcheckFlags& f, const std::vector<std::string>& args, bool env_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckLog log;
  const std::size_t horizon = std::max(f.p, f.kmax) + 2;
  const std::uint64_t seed = resolve_seed(f.seed, env_seed);
  std::optional<ToeplitzSequence> seq;
  if (f.model.model == "ar1") {
    seq = ToeplitzSequence::geometric(f.model.r, horizon);
  } else {
    std::vector<double> raw;
    if (!f.model.seq_json.empty() || !f.model.seq_file.empty()) {
      Json j;
      if (!f.model.seq_json.empty()) {
        j = Json::parse(f.model.seq_json);
      } else {
        std::ifstream in(f.model.seq_file);
        if (!in) throw ValidationError("cannot read " + f.model.seq_file);
        j = Json::parse(in);
      }
      if (j.contains("seq")) {
        for (const auto& e : j.at("seq")) raw.push_back(e.get<double>());
        if (check_table(log, raw)) seq = ToeplitzSequence(raw);
      } else {
        seq = sequence_from_json(j, horizon);
        log.add("sequence", true, "generated " + std::to_string(horizon) + " lags");
      }
    } else {
      throw ValidationError("toeplitz model needs --seq-file or --seq-json");
    }
  }

  if (seq) {
    const std::size_t p = std::min(f.p, seq->horizon());
    const PdReport pd = validate_pd(build_matrix(ToeplitzModel{*seq}, p));
    log.add("positive-definite", pd.passed,
            pd.passed ? "Cholesky succeeded at p=" + std::to_string(p) : pd.diagnostic);
    if (seq->horizon() > p) {
      const PolyaReport pr = polya_check(*seq, p);
      log.add("polya", pr.verdict == PolyaVerdict::kPass,
              pr.verdict == PolyaVerdict::kPass
                  ? "convex and non-increasing through lag " + std::to_string(p)
                  : "inconclusive at lag " + std::to_string(pr.offending_lag),
              false);
    }
    try {
      const GapIndex d = gap_index(*seq);
      const std::size_t kmax = std::min(f.kmax, seq->horizon() - 3);
      double worst = 0.0;
      std::size_t worst_k = 0;
      for (std::size_t k = 1; k <= kmax; ++k) {
        const double diff = std::abs(q_cov(*seq, d, 1, 1, 1 + k, 1) - f_seq(*seq, k));
        if (diff > worst) {
          worst = diff;
          worst_k = k;
        }
      }
      log.add("qcov-vs-f", worst <= 1e-12,
              "max |q_cov - f| = " + fmt(worst) + (worst_k ? " at k=" + std::to_string(worst_k) : "") +
                  " over k=1.." + std::to_string(kmax));
      const FConditionScan scan = scan_f_conditions(*seq, 1, seq->horizon() - 2);
      std::string detail;
      if (scan.first_increase) detail = "f increases at k=" + std::to_string(*scan.first_increase);
      if (scan.first_flog_decrease)
        detail += (detail.empty() ? "" : "; ") + std::string("f(k) log k decreases at k=") +
                  std::to_string(*scan.first_flog_decrease);
      if (scan.ok()) detail = "f non-increasing and f(k) log k non-decreasing";
      log.add("f-conditions", scan.ok(), detail, false);
    } catch (const ValidationError& e) {
      log.add("gap-index", false, e.what());
    }
  }

  if (f.model.model == "ar1") {
    const double r = f.model.r;
    const SMoments m = estimate_s_moments(r, 3, 3, f.draws, f.mc_len, seed, f.workers);
    for (std::size_t l = 1; l <= 3; ++l) {
      const double diff = std::abs(m.var[l - 1] - s_var(r, l));
      log.add("s_var-mc lag " + std::to_string(l), diff <= f.mc_tol,
              "MC " + fmt(m.var[l - 1]) + " vs " + fmt(s_var(r, l)));
    }
    for (std::size_t k = 1; k <= 3; ++k) {
      const double diff = std::abs(m.adj[k - 1] - s_cov_adjacent(r, k));
      log.add("s_cov_adjacent-mc k=" + std::to_string(k), diff <= f.mc_tol,
              "MC " + fmt(m.adj[k - 1]) + " vs " + fmt(s_cov_adjacent(r, k)));
    }
  }

  const fs::path out(f.out);
  fs::create_directories(out);
  const Json report{{"passed", !log.failed}, {"checks", log.checks}};
  write_json(report, out / "covcheck.json");
  write_manifest(out, "covcheck", args, seed,
                 {{"model", f.model.model}, {"r", f.model.r}, {"p", f.p}, {"draws", f.draws}},
                 {"covcheck.json"}, seconds_since(t0));
  return log.failed ? kCheckFailed : kOk;
}

// ---------------------------------------------------------------- rerun

std::vector<std::string> strip_option(const std::vector<std::string>& args, const std::string& name) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == name) {
      ++k;
      continue;
    }
    if (args[k].rfind(name + "=", 0) == 0) continue;
    out.push_back(args[k]);
  }
  return out;
}

int cmd_rerun(const std::string& manifest, const std::string& out) {
  std::ifstream in(manifest);
  if (!in) throw ValidationError("cannot read " + manifest);
  Json m;
  try {
    m = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  if (!m.contains("args") || !m.contains("seed")) throw ValidationError("manifest lacks args/seed");
  auto args = m.at("args").get<std::vector<std::string>>();
  if (args.empty() || args.front() == "rerun") throw ValidationError("manifest has no command");
  args = strip_option(strip_option(args, "--seed"), "--out");
  const auto seed = m.at("seed").get<std::uint64_t>();
  args.insert(args.end(), {"--seed", std::to_string(seed)});
  if (!out.empty()) {
    args.insert(args.end(), {"--out", out});
  } else {
    const fs::path dir = fs::path(manifest).parent_path();
    args.insert(args.end(), {"--out", dir.empty() ? "." : dir.string()});
  }
  return run(args, false);
}

}  // namespace

int run(const std::vector<std::string>& args, bool env_seed) {
  CLI::App app{"Largest sample correlation: simulation, limit laws and covariance tests", "maxcorr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MAXCORR_VERSION);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo campaign for one statistic");
  simulate->add_option("--n", sim.n, "observations")->check(CLI::PositiveNumber);
  simulate->add_option("--p", sim.p, "dimension")->check(CLI::PositiveNumber);
  add_model_flags(simulate, sim.model);
  simulate->add_option("--stat", sim.stat, "wn, norm, raw, wstar or clt")
      ->check(CLI::IsMember({"wn", "norm", "raw", "wstar", "clt"}));
  simulate->add_option("--reps", sim.reps, "replicates")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "master seed (EC_SEED overrides)");
  simulate->add_option("--workers", sim.workers, "worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "output directory");
  simulate->add_option("--bins", sim.bins, "histogram bins (default ceil(sqrt(reps)))");
  simulate->add_option("--qq-grid", sim.qq_grid, "Q-Q grid points");
  simulate->add_flag("--centered", sim.centered, "Pearson correlations");
  simulate->add_flag("--compare-wstar", sim.compare_wstar, "also simulate W* and its Q-Q pairs");
  simulate->add_flag("--dry-run", sim.dry_run, "print the resolved configuration and stop");
  std::vector<std::string> preset_names;
  for (const auto& [name, _] : presets()) preset_names.push_back(name);
  simulate->add_option("--preset", sim.preset, "figure preset")->check(CLI::IsMember(preset_names));

  TestFlags tf;
  auto* test = app.add_subcommand("test", "identity or AR(1)-structure test");
  test->add_option("--test", tf.test, "identity or ar1")->check(CLI::IsMember({"identity", "ar1"}));
  test->add_option("--alpha", tf.alpha, "level (default 0.05)")->check(CLI::Range(0.0, 1.0));
  test->add_option("--data", tf.data, "CSV file: n rows of p comma-separated numbers");
  test->add_flag("--generate", tf.generate, "draw the data from a model instead");
  test->add_option("--n", tf.n, "observations for --generate");
  test->add_option("--p", tf.p, "dimension for --generate");
  add_model_flags(test, tf.model);
  test->add_option("--seed", tf.seed, "master seed for --generate (EC_SEED overrides)");
  test->add_flag("--uncentered", tf.uncentered, "identity test on uncentered correlations");
  test->add_option("--dump", tf.dump, "write the generated matrix as CSV");
  test->add_option("--out", tf.out, "directory for outcome.json and manifest.json");

  LimitsFlags lf;
  auto* limits = app.add_subcommand("limits", "regime, normalizing constants and limit law");
  limits->add_option("--n", lf.n, "observations")->required();
  limits->add_option("--p", lf.p, "dimension")->required();
  limits->add_option("--r", lf.r, "AR(1) parameter");
  limits->add_flag("--toeplitz", lf.toeplitz, "Toeplitz limit from a sequence");
  limits->add_option("--seq-file", lf.model.seq_file, "Toeplitz sequence JSON file");
  limits->add_option("--seq-json", lf.model.seq_json, "Toeplitz sequence JSON text");
  limits->add_option("--gamma", lf.gamma, "override the plug-in r_p sqrt(log p)");
  limits->add_option("--grid", lf.grid, "cdf table lo:hi:steps");
  limits->add_option("--lambda-band", lf.regime.lambda_band, "critical band half-width");
  limits->add_option("--c0", lf.regime.c0, "near-one boundary constant");
  limits->add_option("--near-one-r", lf.regime.near_one_r, "supercritical r reported as near one");
  limits->add_option("--out", lf.out, "directory for limits.json and manifest.json");

  CovcheckFlags cf;
  auto* covcheck = app.add_subcommand("covcheck", "covariance identity consistency checks");
  add_model_flags(covcheck, cf.model);
  covcheck->add_option("--p", cf.p, "dimension for the definiteness check");
  covcheck->add_option("--kmax", cf.kmax, "largest k for q_cov vs f");
  covcheck->add_option("--draws", cf.draws, "Monte Carlo draws");
  covcheck->add_option("--mc-len", cf.mc_len, "length of each Monte Carlo vector");
  covcheck->add_option("--mc-tol", cf.mc_tol, "absolute Monte Carlo tolerance");
  covcheck->add_option("--seed", cf.seed, "master seed (EC_SEED overrides)");
  covcheck->add_option("--workers", cf.workers, "worker threads")->check(CLI::PositiveNumber);
  covcheck->add_option("--out", cf.out, "directory for covcheck.json and manifest.json");

  std::string manifest, rerun_out;
  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest.json");
  rerun->add_option("manifest", manifest, "manifest.json path")->required();
  rerun->add_option("--out", rerun_out, "output directory (default: the manifest's)");

  std::vector<std::string> argv_store{"maxcorr"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (simulate->parsed()) return cmd_simulate(sim, simulate, args, env_seed);
    if (test->parsed()) return cmd_test(tf, args, env_seed);
    if (limits->parsed()) return cmd_limits(lf, args);
    if (covcheck->parsed()) return cmd_covcheck(cf, args, env_seed);
    if (rerun->parsed()) return cmd_rerun(manifest, rerun_out);
    return kUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const DegenerateData& e) {
    std::cerr << "maxcorr: degenerate data: " << e.what() << "\n";
    return kDegenerate;
  } catch (const Json::exception& e) {
    std::cerr << "maxcorr: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    // Validation, domain and definiteness errors are all bad input.
    std::cerr << "maxcorr: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace maxcorr::cli
