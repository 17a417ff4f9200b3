// Parallel kernels against their serial references.

#include "maxcorr/kernels.hpp"
#include "maxcorr/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace maxcorr;

namespace {

std::vector<double> normals(std::size_t n, std::size_t p) {
  std::vector<double> x(n * p);
  for (std::size_t k = 0; k < n; ++k)
    fill_normal_row({1, 0}, StreamTag::kAux, static_cast<std::uint32_t>(k),
                    std::span<double>(x.data() + k * p, p));
  return x;
}

void BM_GramMax(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const auto x = normals(n, p);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram_max_upper(x.data(), n, p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * p * (p - 1) / 2));
}

void BM_GramMaxReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const auto x = normals(n, p);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram_max_upper_reference(x.data(), n, p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * p * (p - 1) / 2));
}

void BM_MultiplyUpper(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const auto z = normals(n, p);
  auto u = normals(p, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < a; ++b) u[a * p + b] = 0.0;
  std::vector<double> out(n * p);
  for (auto _ : state) {
    kernels::multiply_upper(z.data(), n, p, u.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_MultiplyUpperReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const auto z = normals(n, p);
  auto u = normals(p, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < a; ++b) u[a * p + b] = 0.0;
  std::vector<double> out(n * p);
  for (auto _ : state) {
    kernels::multiply_upper_reference(z.data(), n, p, u.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_GramMax)->Args({400, 400})->Args({2000, 800})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramMaxReference)->Args({400, 400})->Args({2000, 800})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplyUpper)->Args({400, 400})->Args({2000, 800})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplyUpperReference)->Args({400, 400})->Args({2000, 800})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
