#include "maxcorr/kernels.hpp"

namespace maxcorr::kernels {

MaxEntry gram_max_upper_reference(const double* x, std::size_t n, std::size_t p,
                                  std::size_t max_lag) {
  MaxEntry best;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p && j - i <= max_lag; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += x[k * p + i] * x[k * p + j];
      if (s > best.value) best = {s, i, j};
    }
  return best;
}

void multiply_upper_reference(const double* z, std::size_t n, std::size_t p, const double* u,
                              double* out) {
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < p; ++b) {
      double s = 0.0;
      for (std::size_t m = 0; m <= b; ++m) s += z[a * p + m] * u[m * p + b];
      out[a * p + b] = s;
    }
}

}  // namespace maxcorr::kernels
