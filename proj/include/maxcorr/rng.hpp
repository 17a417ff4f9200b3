#pragma once

// Counter-based random streams. Every variate is a pure function of
// (master seed, replicate, stream tag, row, column), so replicates and rows can
// be generated on any worker in any order with bit-identical output.

#include <array>
#include <cstdint>
#include <span>

namespace maxcorr {

struct StreamSeed {
  std::uint64_t master = 0;
  std::uint64_t replicate = 0;

  bool operator==(const StreamSeed&) const = default;
};

// Disjoint counter sub-spaces for the different consumers of one StreamSeed.
enum class StreamTag : std::uint32_t {
  kSample = 0,  // entries of a SampleMatrix
  kMaxima = 1,  // W* normals
  kLaw = 2,     // limit-law variates
  kAux = 3,
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

/// Uniform on the open interval (0,1) with 52 random bits. Midpoints of the
/// 2^52 cells are exact, so the result never rounds to 0 or 1.
inline double open_uniform(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Standard normal quantile; |error| well below 1e-12 on (0,1).
double normal_quantile(double u);

/// Standard normal cdf.
double normal_cdf(double x);

/// Two open uniforms addressed by (seed, tag, row, pair).
std::array<double, 2> uniform_pair(const StreamSeed& seed, StreamTag tag, std::uint32_t row,
                                   std::uint32_t pair) noexcept;

/// Fills `out` with the standard normals of one row: out[j] is the variate at
/// column j of `row`. Columns are generated in pairs from one Philox block.
void fill_normal_row(const StreamSeed& seed, StreamTag tag, std::uint32_t row,
                     std::span<double> out);

}  // namespace maxcorr
