#include "maxcorr/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <vector>

namespace maxcorr::kernels {
namespace {

constexpr std::size_t kPanel = 8;
constexpr std::size_t kDepthChunk = 256;

// Column panels of width 8: panel q stores element (k, c) of the logical
// rows x cols matrix at data[q * rows * 8 + k * 8 + c]. Columns past `cols`
// are zero.
struct Panels {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t count = 0;
  std::vector<double> data;

  const double* panel(std::size_t q) const { return data.data() + q * rows * kPanel; }
};

// Logical element (k, c) is src[k * row_stride + c * col_stride].
Panels pack(const double* src, std::size_t rows, std::size_t cols, std::size_t row_stride,
            std::size_t col_stride) {
  Panels P;
  P.rows = rows;
  P.cols = cols;
  P.count = (cols + kPanel - 1) / kPanel;
  P.data.assign(P.count * rows * kPanel, 0.0);
  for (std::size_t q = 0; q < P.count; ++q) {
    double* dst = P.data.data() + q * rows * kPanel;
    const std::size_t width = std::min(kPanel, cols - q * kPanel);
    for (std::size_t k = 0; k < rows; ++k)
      for (std::size_t c = 0; c < width; ++c)
        dst[k * kPanel + c] = src[k * row_stride + (q * kPanel + c) * col_stride];
  }
  return P;
}

// c[r * ldc + s] += sum_{k0 <= k < k1} a[k * 8 + r] * b[k * 8 + s], r < 4, s < 8.
inline void micro_4x8(const double* __restrict a, const double* __restrict b, std::size_t k0,
                      std::size_t k1, double* __restrict c, std::size_t ldc) {
  double acc[4][kPanel] = {};
  for (std::size_t k = k0; k < k1; ++k) {
    const double* ak = a + k * kPanel;
    const double* bk = b + k * kPanel;
    for (int r = 0; r < 4; ++r)
#pragma omp simd
      for (std::size_t s = 0; s < kPanel; ++s) acc[r][s] += ak[r] * bk[s];
  }
  for (int r = 0; r < 4; ++r)
    for (std::size_t s = 0; s < kPanel; ++s) c[r * ldc + s] += acc[r][s];
}

// tile (row-major, ld = 8 * (qb1 - qb0)) = A^T B over panels [qa0, qa1) x
// [qb0, qb1) and logical rows [0, depth). With upper_only, panel pairs with
// qa > qb are skipped.
void tile_product(const Panels& A, std::size_t qa0, std::size_t qa1, const Panels& B,
                  std::size_t qb0, std::size_t qb1, std::size_t depth, bool upper_only,
                  std::vector<double>& tile) {
  const std::size_t ld = (qb1 - qb0) * kPanel;
  tile.assign((qa1 - qa0) * kPanel * ld, 0.0);
  for (std::size_t k0 = 0; k0 < depth; k0 += kDepthChunk) {
    const std::size_t k1 = std::min(depth, k0 + kDepthChunk);
    for (std::size_t qb = qb0; qb < qb1; ++qb) {
      const double* b = B.panel(qb);
      for (std::size_t qa = qa0; qa < qa1; ++qa) {
        if (upper_only && qa > qb) continue;
        const double* a = A.panel(qa);
        double* c = tile.data() + (qa - qa0) * kPanel * ld + (qb - qb0) * kPanel;
        micro_4x8(a, b, k0, k1, c, ld);
        micro_4x8(a + 4, b, k0, k1, c + 4 * ld, ld);
      }
    }
  }
}

std::size_t panels_per_block(std::size_t block) {
  return std::max<std::size_t>(1, (block + kPanel - 1) / kPanel);
}

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

MaxEntry gram_max_upper(const double* x, std::size_t n, std::size_t p, const GramOptions& opts) {
  MaxEntry best;
  if (p < 2 || opts.max_lag == 0) return best;
  const Panels P = pack(x, n, p, p, 1);
  const std::size_t bp = panels_per_block(opts.block);
  const std::size_t width = bp * kPanel;
  const std::size_t nblocks = (P.count + bp - 1) / bp;

  struct Task {
    std::size_t bi, bj;
  };
  std::vector<Task> tasks;
  for (std::size_t bi = 0; bi < nblocks; ++bi)
    for (std::size_t bj = bi; bj < nblocks; ++bj) {
      const std::size_t min_lag = bj == bi ? 1 : bj * width - (bi * width + width - 1);
      if (min_lag <= opts.max_lag) tasks.push_back({bi, bj});
    }

  std::vector<MaxEntry> results(tasks.size());
  const auto ntasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel num_threads(resolve_threads(opts.threads))
  {
    std::vector<double> tile;
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < ntasks; ++t) {
      const auto [bi, bj] = tasks[static_cast<std::size_t>(t)];
      const std::size_t qa0 = bi * bp, qa1 = std::min(P.count, qa0 + bp);
      const std::size_t qb0 = bj * bp, qb1 = std::min(P.count, qb0 + bp);
      tile_product(P, qa0, qa1, P, qb0, qb1, n, bi == bj, tile);
      const std::size_t ld = (qb1 - qb0) * kPanel;
      const std::size_t i0 = qa0 * kPanel, i1 = std::min(p, qa1 * kPanel);
      const std::size_t j0 = qb0 * kPanel, j1 = std::min(p, qb1 * kPanel);
      MaxEntry local;
      for (std::size_t i = i0; i < i1; ++i) {
        const std::size_t jlo = std::max(j0, i + 1);
        const std::size_t jhi =
            opts.max_lag >= p ? j1 : std::min(j1, i + opts.max_lag + 1);
        const double* row = tile.data() + (i - i0) * ld - j0;
        for (std::size_t j = jlo; j < jhi; ++j)
          if (row[j] > local.value) local = {row[j], i, j};
      }
      results[static_cast<std::size_t>(t)] = local;
    }
  }
  for (const auto& r : results)
    if (beats(r, best)) best = r;
  return best;
}

void multiply_upper(const double* z, std::size_t n, std::size_t p, const double* u, double* out,
                    std::size_t block, int threads) {
  const Panels A = pack(z, p, n, 1, p);
  const Panels B = pack(u, p, p, p, 1);
  const std::size_t bp = panels_per_block(block);
  const std::size_t na = (A.count + bp - 1) / bp;
  const std::size_t nb = (B.count + bp - 1) / bp;
  const auto ntasks = static_cast<std::ptrdiff_t>(na * nb);
#pragma omp parallel num_threads(resolve_threads(threads))
  {
    std::vector<double> tile;
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < ntasks; ++t) {
      const std::size_t bi = static_cast<std::size_t>(t) / nb;
      const std::size_t bj = static_cast<std::size_t>(t) % nb;
      const std::size_t qa0 = bi * bp, qa1 = std::min(A.count, qa0 + bp);
      const std::size_t qb0 = bj * bp, qb1 = std::min(B.count, qb0 + bp);
      const std::size_t a0 = qa0 * kPanel, a1 = std::min(n, qa1 * kPanel);
      const std::size_t b0 = qb0 * kPanel, b1 = std::min(p, qb1 * kPanel);
      tile_product(A, qa0, qa1, B, qb0, qb1, b1, false, tile);
      const std::size_t ld = (qb1 - qb0) * kPanel;
      for (std::size_t a = a0; a < a1; ++a)
        std::copy_n(tile.data() + (a - a0) * ld, b1 - b0, out + a * p + b0);
    }
  }
}

}  // namespace maxcorr::kernels
