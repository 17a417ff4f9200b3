#include "maxcorr/montecarlo.hpp"

#include "maxcorr/rng.hpp"
#include "maxcorr/sampler.hpp"
#include "maxcorr/stats.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>

namespace maxcorr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_sorted(std::span<const double> s) {
  if (s.empty()) throw ValidationError("empty sample");
  if (!std::is_sorted(s.begin(), s.end())) throw ContractViolation("sample is not sorted");
}

double evaluate(const McConfig& cfg, const ModelSampler* sampler, std::size_t rep) {
  const StreamSeed seed{cfg.seed, rep};
  if (std::holds_alternative<StatWstar>(cfg.statistic)) return w_star(cfg.p, seed);
  const SampleMatrix x = (*sampler)(cfg.n, seed, 1);
  const StatOptions serial{kernels::kDefaultBlock, 1};
  const double L = cfg.centered ? max_corr_centered(x, serial).value
                                : max_corr_uncentered(x, serial).value;
  const double n = static_cast<double>(cfg.n), p = static_cast<double>(cfg.p);
  return std::visit(Overloaded{
                        [&](const StatWn& s) { return w_statistic(L, n, p, s.r); },
                        [&](const StatNormalized& s) { return s.constants.apply(L); },
                        [&](const StatRaw&) { return L; },
                        [&](const StatWstar&) { return 0.0; },
                        [&](const StatCltToeplitz& s) {
                          return clt_normalize_toeplitz(L, n, p, s.r1, s.f);
                        },
                    },
                    cfg.statistic);
}

std::optional<ModelSampler> make_sampler(const McConfig& cfg) {
  if (std::holds_alternative<StatWstar>(cfg.statistic)) return std::nullopt;
  return ModelSampler(cfg.model, cfg.p);
}

void write_lines(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw ValidationError("write failed: " + path.string());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view statistic_name(const McStatistic& s) {
  return std::visit(Overloaded{
                        [](const StatWn&) { return std::string_view("wn"); },
                        [](const StatNormalized&) { return std::string_view("norm"); },
                        [](const StatRaw&) { return std::string_view("raw"); },
                        [](const StatWstar&) { return std::string_view("wstar"); },
                        [](const StatCltToeplitz&) { return std::string_view("clt"); },
                    },
                    s);
}

void validate_config(const McConfig& cfg) {
  if (cfg.reps < 1) throw ValidationError("reps must be at least 1");
  if (cfg.workers < 1) throw ValidationError("workers must be at least 1");
  if (cfg.p < 3) throw ValidationError("p must be at least 3");
  if (std::holds_alternative<StatWstar>(cfg.statistic)) return;
  if (cfg.n < 3) throw ValidationError("n must be at least 3");
  validate_model(cfg.model, cfg.p);
  if (const auto* wn = std::get_if<StatWn>(&cfg.statistic)) {
    if (!(wn->r >= 0.0 && wn->r < 1.0)) throw ValidationError("Wn needs r in [0,1)");
    if (const auto* ar = std::get_if<Ar1Model>(&cfg.model); ar && ar->r != wn->r)
      throw ValidationError("Wn parameter r differs from the AR(1) model");
  }
  if (const auto* clt = std::get_if<StatCltToeplitz>(&cfg.statistic)) {
    if (clt->r1 != model_correlation(cfg.model, 1))
      throw ValidationError("clt statistic r1 differs from the model's lag-one correlation");
    if (!(clt->f > 0.0 && clt->f <= 1.0)) throw ValidationError("clt statistic needs f in (0,1]");
  }
  if (const auto* nc = std::get_if<StatNormalized>(&cfg.statistic))
    if (!(nc->constants.multiplier > 0.0)) throw ValidationError("multiplier must be positive");
}

double replicate_value(const McConfig& cfg, std::size_t rep) {
  validate_config(cfg);
  const auto sampler = make_sampler(cfg);
  return evaluate(cfg, sampler ? &*sampler : nullptr, rep);
}

double Ecdf::operator()(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::optional<LimitLaw> default_reference(const McStatistic& s) {
  if (std::holds_alternative<StatWn>(s) || std::holds_alternative<StatWstar>(s))
    return GumbelK{1.0};
  if (std::holds_alternative<StatCltToeplitz>(s)) return StdNormal{};
  return std::nullopt;
}

McSummary run(const McConfig& cfg, const RunOptions& opts) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto sampler = make_sampler(cfg);
  const ModelSampler* sp = sampler ? &*sampler : nullptr;

  McSummary s;
  s.config = cfg;
  s.values.assign(cfg.reps, 0.0);
  std::exception_ptr error;
  std::size_t error_rep = cfg.reps;
  std::string error_what;
  const auto reps = static_cast<std::ptrdiff_t>(cfg.reps);

#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers)
  for (std::ptrdiff_t k = 0; k < reps; ++k) {
    const auto rep = static_cast<std::size_t>(k);
    try {
      s.values[rep] = evaluate(cfg, sp, rep);
    } catch (const DegenerateData& e) {
#pragma omp critical(maxcorr_mc_error)
      if (rep < error_rep) {
        error_rep = rep;
        error_what = e.what();
        error = nullptr;
      }
    } catch (...) {
#pragma omp critical(maxcorr_mc_error)
      if (rep < error_rep) {
        error_rep = rep;
        error = std::current_exception();
      }
    }
  }
  if (error_rep < cfg.reps) {
    if (error) std::rethrow_exception(error);
    throw ReplicateFailure(error_rep, error_what);
  }

  s.sorted = s.values;
  std::sort(s.sorted.begin(), s.sorted.end());
  const auto ref = opts.reference ? opts.reference : default_reference(cfg.statistic);
  if (ref) {
    s.ks = KsResult{ks_distance(s.sorted, *ref), *ref};
    if (opts.qq_grid > 0) s.qq = qq_pairs(s.sorted, *ref, opts.qq_grid);
  }
  s.histogram = histogram(s.values, opts.bins);
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

double ks_distance(std::span<const double> sorted, const LimitLaw& law) {
  require_sorted(sorted);
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(law, sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - F, F - static_cast<double>(i) / m});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_sorted(a);
  require_sorted(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double empirical_quantile(std::span<const double> sorted, double prob) {
  require_sorted(sorted);
  if (!(prob >= 0.0 && prob <= 1.0)) throw ValidationError("probability outside [0,1]");
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<QqPair> qq_pairs(std::span<const double> sorted, const LimitLaw& law,
                             std::size_t grid) {
  require_sorted(sorted);
  std::vector<QqPair> out(grid);
  for (std::size_t j = 1; j <= grid; ++j) {
    const double a = static_cast<double>(j) / static_cast<double>(grid + 1);
    out[j - 1] = {empirical_quantile(sorted, a), inverse_cdf(law, a)};
  }
  return out;
}

std::vector<QqPair> qq_pairs(std::span<const double> sorted, std::span<const double> ref_sorted,
                             std::size_t grid) {
  require_sorted(sorted);
  require_sorted(ref_sorted);
  std::vector<QqPair> out(grid);
  for (std::size_t j = 1; j <= grid; ++j) {
    const double a = static_cast<double>(j) / static_cast<double>(grid + 1);
    out[j - 1] = {empirical_quantile(sorted, a), empirical_quantile(ref_sorted, a)};
  }
  return out;
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw ValidationError("histogram of an empty sample");
  if (bins == 0)
    bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(values.size()))));
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  edges.back() = hi;
  return histogram(values, std::move(edges));
}

Histogram histogram(std::span<const double> values, std::vector<double> edges) {
  if (values.empty()) throw ValidationError("histogram of an empty sample");
  if (edges.size() < 2) throw ValidationError("histogram needs at least two edges");
  for (std::size_t b = 1; b < edges.size(); ++b)
    if (!(edges[b] > edges[b - 1])) throw ValidationError("histogram edges must increase");
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    bin = std::min(bin, h.counts.size() - 1);
    ++h.counts[bin];
  }
  h.edges = std::move(edges);
  return h;
}

SMoments estimate_s_moments(double r, std::size_t max_lag, std::size_t max_k, std::size_t draws,
                            std::size_t len, std::uint64_t seed, int workers) {
  if (!(r >= 0.0 && r < 1.0)) throw ValidationError("r must lie in [0,1)");
  if (max_lag < 1 || max_k < 1 || draws < 1) throw ValidationError("empty moment request");
  if (len < std::max(max_lag, max_k + 1) + 1) throw ValidationError("vectors too short");
  if (draws > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("too many draws");
  constexpr std::size_t kChunk = 4096;
  const std::size_t nchunks = (draws + kChunk - 1) / kChunk;
  const std::size_t width = max_lag + max_k;
  std::vector<double> partial(nchunks * width, 0.0);
  const double s = std::sqrt(1.0 - r * r);
  std::vector<double> rl(max_lag + 1);
  for (std::size_t l = 0; l <= max_lag; ++l) rl[l] = std::pow(r, static_cast<double>(l));

#pragma omp parallel num_threads(workers)
  {
    std::vector<double> x(len), s1(len);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
      double* acc = partial.data() + static_cast<std::size_t>(c) * width;
      const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
      const std::size_t hi = std::min(draws, lo + kChunk);
      for (std::size_t row = lo; row < hi; ++row) {
        fill_normal_row(StreamSeed{seed, 0}, StreamTag::kAux, static_cast<std::uint32_t>(row), x);
        for (std::size_t j = 1; j < len; ++j) x[j] = r * x[j - 1] + s * x[j];
        for (std::size_t l = 1; l <= max_lag; ++l) {
          double sum = 0.0;
          for (std::size_t i = 0; i + l < len; ++i) {
            const double v = x[i] * x[i + l] - 0.5 * rl[l] * (x[i] * x[i] + x[i + l] * x[i + l]);
            sum += v * v;
          }
          acc[l - 1] += sum / static_cast<double>(len - l);
        }
        for (std::size_t i = 0; i + 1 < len; ++i)
          s1[i] = x[i] * x[i + 1] - 0.5 * r * (x[i] * x[i] + x[i + 1] * x[i + 1]);
        for (std::size_t k = 1; k <= max_k; ++k) {
          double sum = 0.0;
          for (std::size_t i = 0; i + k + 1 < len; ++i) sum += s1[i] * s1[i + k];
          acc[max_lag + k - 1] += sum / static_cast<double>(len - k - 1);
        }
      }
    }
  }
  std::vector<double> total(width, 0.0);
  for (std::size_t c = 0; c < nchunks; ++c)
    for (std::size_t w = 0; w < width; ++w) total[w] += partial[c * width + w];
  SMoments m;
  for (std::size_t l = 0; l < max_lag; ++l) m.var.push_back(total[l] / static_cast<double>(draws));
  for (std::size_t k = 0; k < max_k; ++k)
    m.adj.push_back(total[max_lag + k] / static_cast<double>(draws));
  return m;
}

void write_values_csv(const McSummary& s, const std::filesystem::path& path) {
  std::string body;
  for (double v : s.values) body += fmt(v) + "\n";
  write_lines(path, body);
}

void write_qq_csv(const McSummary& s, const std::filesystem::path& path) {
  std::string body = "empirical,reference\n";
  for (const auto& q : s.qq) body += fmt(q.empirical) + "," + fmt(q.reference) + "\n";
  write_lines(path, body);
}

void write_hist_csv(const McSummary& s, const std::filesystem::path& path) {
  std::string body = "lower,upper,count\n";
  for (std::size_t b = 0; b < s.histogram.counts.size(); ++b)
    body += fmt(s.histogram.edges[b]) + "," + fmt(s.histogram.edges[b + 1]) + "," +
            std::to_string(s.histogram.counts[b]) + "\n";
  write_lines(path, body);
}

}  // namespace maxcorr
