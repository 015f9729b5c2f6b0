#include <cmath>
#include <set>

#include "doctest.h"
#include "lqcd/rng.hpp"

using namespace lqcd;

// Known-answer vectors from the Random123 distribution (kat_vectors,
// philox4x32_10).
TEST_CASE("Philox4x32-10 known answers") {
  using B = Philox4x32::Block;
  {
    const Philox4x32 rng(0);
    CHECK(rng(B{0, 0, 0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  }
  {
    const Philox4x32 rng(0xffffffffffffffffull);
    CHECK(rng(B{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}) ==
          B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  }
  {
    const Philox4x32 rng(0x299f31d0a4093822ull);
    CHECK(rng(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}) ==
          B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  }
}

TEST_CASE("counter addressing is order independent") {
  const Philox4x32 rng(42);
  const auto a = gaussian_pair(rng, 17, 2, 5);
  (void)gaussian_pair(rng, 3, 0, 0);
  const auto b = gaussian_pair(rng, 17, 2, 5);
  CHECK(a == b);
  CHECK(gaussian_pair(rng, 17, 2, 6) != a);
  CHECK(gaussian_pair(Philox4x32(43), 17, 2, 5) != a);
}

TEST_CASE("gaussian moments") {
  const Philox4x32 rng(7);
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n / 2; ++i) {
    const auto [x, y] = gaussian_pair(rng, static_cast<std::uint64_t>(i), 16, 0);
    for (double v : {x, y}) {
      s1 += v;
      s2 += v * v;
      s4 += v * v * v * v;
    }
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(s4 / n - 3.0) < 0.1);
}
