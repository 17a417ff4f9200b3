#include "maxcorr/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

namespace maxcorr {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

inline PhiloxKey key_of(std::uint64_t master) {
  return {static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)};
}

// Replicate indices up to 2^56 are supported; the top byte of word 3 carries the tag.
inline PhiloxCounter counter_of(const StreamSeed& seed, StreamTag tag, std::uint32_t row,
                                std::uint32_t pair) {
  const auto rep_hi = static_cast<std::uint32_t>(seed.replicate >> 32) & 0x00FFFFFFu;
  return {pair, row, static_cast<std::uint32_t>(seed.replicate),
          (static_cast<std::uint32_t>(tag) << 24) | rep_hi};
}

inline std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double normal_quantile(double u) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::array<double, 2> uniform_pair(const StreamSeed& seed, StreamTag tag, std::uint32_t row,
                                   std::uint32_t pair) noexcept {
  const auto out = philox4x32_10(counter_of(seed, tag, row, pair), key_of(seed.master));
  return {open_uniform(join(out[0], out[1])), open_uniform(join(out[2], out[3]))};
}

void fill_normal_row(const StreamSeed& seed, StreamTag tag, std::uint32_t row,
                     std::span<double> out) {
  const std::size_t p = out.size();
  for (std::size_t j = 0; j < p; j += 2) {
    const auto u = uniform_pair(seed, tag, row, static_cast<std::uint32_t>(j / 2));
    out[j] = normal_quantile(u[0]);
    if (j + 1 < p) out[j + 1] = normal_quantile(u[1]);
  }
}

}  // namespace maxcorr
