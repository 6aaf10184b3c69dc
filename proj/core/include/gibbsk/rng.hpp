#pragma once

// Counter-based Philox4x32-10 generator (Salmon et al., SC 2011).
// Each Monte-Carlo draw is addressed by (seed, sample index, slot), so the
// stream seen by a sample does not depend on how work is split across threads.

#include <array>
#include <cstdint>

namespace gibbsk {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  /// Ten rounds of Philox over the 128-bit counter (c0, c1).
  Block operator()(std::uint64_t c0, std::uint64_t c1) const {
    Block ctr{static_cast<std::uint32_t>(c0), static_cast<std::uint32_t>(c0 >> 32),
              static_cast<std::uint32_t>(c1), static_cast<std::uint32_t>(c1 >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

  /// Two doubles in (0, 1) with 53 random bits each; never exactly 0 or 1.
  std::array<double, 2> uniform2(std::uint64_t c0, std::uint64_t c1) const {
    const Block b = (*this)(c0, c1);
    return {to_open_unit(b[0], b[1]), to_open_unit(b[2], b[3])};
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static Block single_round(const Block& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  static double to_open_unit(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(a) << 32) | b) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  std::array<std::uint32_t, 2> key_;
};

/// SplitMix64 finalizer; derives child seeds from (parent, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace gibbsk

#include <cmath>
#include <numbers>

namespace gibbsk {

/// Box–Muller pair of standard normals from one Philox block.
inline std::array<double, 2> normal2(const Philox4x32& gen, std::uint64_t c0, std::uint64_t c1) {
  const auto [u, v] = gen.uniform2(c0, c1);
  const double r = std::sqrt(-2.0 * std::log(u));
  return {r * std::cos(2.0 * std::numbers::pi * v), r * std::sin(2.0 * std::numbers::pi * v)};
}

}  // namespace gibbsk
