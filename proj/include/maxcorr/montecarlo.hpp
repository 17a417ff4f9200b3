#pragma once

// Monte Carlo replication engine: empirical distributions of the extreme
// correlation statistics and their goodness-of-fit summaries.

#include "maxcorr/covariance.hpp"
#include "maxcorr/error.hpp"
#include "maxcorr/limits.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace maxcorr {

struct StatWn {
  double r = 0.0;
};
struct StatNormalized {
  NormConstants constants;
};
struct StatRaw {};
struct StatWstar {};
struct StatCltToeplitz {
  double r1 = 0.0;
  double f = 1.0;
};

using McStatistic = std::variant<StatWn, StatNormalized, StatRaw, StatWstar, StatCltToeplitz>;

std::string_view statistic_name(const McStatistic& s);

struct McConfig {
  std::size_t n = 0;
  std::size_t p = 0;
  CovarianceModel model = Ar1Model{0.0};
  std::size_t reps = 400;
  std::uint64_t seed = 0;
  McStatistic statistic = StatRaw{};
  int workers = 1;
  bool centered = false;  // Pearson instead of uncentered correlations
};

/// Throws ValidationError for inconsistent settings, e.g. a Wn parameter that
/// differs from the AR(1) model's r.
void validate_config(const McConfig& cfg);

/// A replicate raised DegenerateData; carries its index.
class ReplicateFailure : public DegenerateData {
 public:
  ReplicateFailure(std::size_t replicate, const std::string& what)
      : DegenerateData("replicate " + std::to_string(replicate) + ": " + what),
        replicate_(replicate) {}
  std::size_t replicate() const noexcept { return replicate_; }

 private:
  std::size_t replicate_;
};

/// The statistic of replicate `rep` computed from scratch.
double replicate_value(const McConfig& cfg, std::size_t rep);

/// Right-continuous step function over a sorted sample.
class Ecdf {
 public:
  explicit Ecdf(std::span<const double> sorted) : sorted_(sorted) {}
  double operator()(double x) const;

 private:
  std::span<const double> sorted_;
};

struct KsResult {
  double distance = 0.0;
  LimitLaw reference;
};

struct QqPair {
  double empirical = 0.0;
  double reference = 0.0;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 increasing edges
  std::vector<std::size_t> counts;
};

struct McSummary {
  McConfig config;
  std::vector<double> values;  // replicate order
  std::vector<double> sorted;
  std::optional<KsResult> ks;
  std::vector<QqPair> qq;
  Histogram histogram;
  double seconds = 0.0;

  Ecdf ecdf() const { return Ecdf(sorted); }
};

struct RunOptions {
  std::optional<LimitLaw> reference;  // default chosen from the statistic
  std::size_t qq_grid = 99;
  std::size_t bins = 0;  // 0: ceil(sqrt(reps))
};

/// Reference law implied by the statistic: GumbelK{1} for Wn and W*, N(0,1)
/// for the CLT statistic, none otherwise.
std::optional<LimitLaw> default_reference(const McStatistic& s);

McSummary run(const McConfig& cfg, const RunOptions& opts = {});

/// sup |ECDF - F| over a sorted sample.
double ks_distance(std::span<const double> sorted, const LimitLaw& law);
double ks_two_sample(std::span<const double> a_sorted, std::span<const double> b_sorted);

/// Type-7 quantile (linear interpolation of order statistics).
double empirical_quantile(std::span<const double> sorted, double prob);

/// Pairs at probabilities j / (grid + 1), j = 1..grid.
std::vector<QqPair> qq_pairs(std::span<const double> sorted, const LimitLaw& law,
                             std::size_t grid);
std::vector<QqPair> qq_pairs(std::span<const double> sorted, std::span<const double> ref_sorted,
                             std::size_t grid);

/// Equal-width bins spanning [min, max]; bins = 0 uses ceil(sqrt(size)).
Histogram histogram(std::span<const double> values, std::size_t bins = 0);
/// Explicit edges; values outside the edges are counted in the end bins.
Histogram histogram(std::span<const double> values, std::vector<double> edges);

/// Monte Carlo moments of S(i,j) = x_i x_j - r^{j-i} (x_i^2 + x_j^2) / 2 under
/// AR(1), averaged over all positions of `draws` stationary vectors of length
/// `len`. var[l - 1] estimates Var S(i, i+l); adj[k - 1] estimates
/// E[S(i,i+1) S(i+k,i+k+1)].
struct SMoments {
  std::vector<double> var;
  std::vector<double> adj;
};
SMoments estimate_s_moments(double r, std::size_t max_lag, std::size_t max_k, std::size_t draws,
                            std::size_t len, std::uint64_t seed, int workers = 1);

/// values.csv, qq.csv and hist.csv exports; summary.json comes from summary_to_json.
void write_values_csv(const McSummary& s, const std::filesystem::path& path);
void write_qq_csv(const McSummary& s, const std::filesystem::path& path);
void write_hist_csv(const McSummary& s, const std::filesystem::path& path);

}  // namespace maxcorr
