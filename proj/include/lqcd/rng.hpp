#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace lqcd {

// Philox4x32-10 (the Random123 generator). Output is a pure function of
// (key, counter), so any site can be generated independently of the others.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit constexpr Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  constexpr Block operator()(Block ctr) const {
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  std::array<std::uint32_t, 2> key_;
};

// Stream ids for the counter's third word.
enum class RngStream : std::uint32_t {
  gauge_t = 0,
  gauge_x = 1,
  gauge_y = 2,
  gauge_z = 3,
  spinor = 16,
};

// Two standard normals from the block addressed by (site, stream, draw)
// using Box-Muller.
inline std::pair<double, double> gaussian_pair(const Philox4x32& rng, std::uint64_t site, std::uint32_t stream,
                                               std::uint32_t draw) {
  const auto out = rng({static_cast<std::uint32_t>(site), static_cast<std::uint32_t>(site >> 32), stream, draw});
  const std::uint64_t a = std::uint64_t{out[0]} | (std::uint64_t{out[1]} << 32);
  const std::uint64_t b = std::uint64_t{out[2]} | (std::uint64_t{out[3]} << 32);
  constexpr double kScale = 0x1.0p-53;
  const double u1 = static_cast<double>((a >> 11) + 1) * kScale;  // (0, 1]
  const double u2 = static_cast<double>(b >> 11) * kScale;        // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace lqcd
