// Copyright 2026 The approxdet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "approxdet/approx_units.h"

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "test_oracles.h"

namespace approxdet {
namespace {

const std::string kFixtures = APPROXDET_FIXTURE_DIR;

ApproxAdderSpec adder(int width) {
  ApproxAdderSpec spec;
  spec.width = SignificandWidth(width);
  return spec;
}

TEST(SignificandWidthTest, Halves) {
  EXPECT_EQ(SignificandWidth().bits(), 11);
  EXPECT_EQ(SignificandWidth().low_bits(), 5);
  EXPECT_EQ(SignificandWidth().high_bits(), 6);
  EXPECT_THROW(SignificandWidth(1), std::invalid_argument);
}

TEST(ApproxAdderTest, Examples) {
  const auto r = approx_add_significand(0x0F, 0x01, adder(8));
  EXPECT_EQ(r.sum, 0x00u);
  EXPECT_TRUE(r.dropped_carry);
  EXPECT_EQ(approx_add_significand(0x10, 0x20, adder(8)).sum, 0x30u);
  EXPECT_EQ(approx_add_significand(0xAB, 0x00, adder(8)).sum, 0xABu);
}

TEST(ApproxAdderTest, ErrorIsExactlyDroppedCarryForAllWidths) {
  for (int w = 2; w <= 12; ++w) {
    const std::uint64_t n = std::uint64_t{1} << w;
    const int low = w / 2;
    for (std::uint64_t a = 0; a < n; ++a) {
      for (std::uint64_t b = 0; b < n; ++b) {
        const auto r = approx_add_significand(a, b, adder(w));
        const std::uint64_t full = r.sum + (std::uint64_t{r.carry_out} << w);
        ASSERT_EQ(full, oracle::truncated_add(a, b, w)) << w << ' ' << a << ' ' << b;
        const std::uint64_t err = a + b - full;
        ASSERT_TRUE(err == 0 || err == (std::uint64_t{1} << low));
        ASSERT_EQ(err != 0, r.dropped_carry);
      }
    }
  }
}

TEST(Udm2x2Test, MatchesPinnedFixture) {
  const auto rows = oracle::read_csv(kFixtures + "/udm2x2.csv");
  ASSERT_EQ(rows.size(), 17u);
  const auto table = udm2x2_table();
  int mismatches_vs_exact = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto a = static_cast<std::uint32_t>(std::stoul(rows[i][0]));
    const auto b = static_cast<std::uint32_t>(std::stoul(rows[i][1]));
    const auto p = static_cast<std::uint32_t>(std::stoul(rows[i][2]));
    EXPECT_EQ(udm2x2(a, b), p);
    EXPECT_EQ(table[a * 4 + b], p);
    EXPECT_LT(p, 8u);
    if (p != a * b) ++mismatches_vs_exact;
  }
  EXPECT_EQ(mismatches_vs_exact, 1);
  EXPECT_EQ(udm2x2(3, 3), 7u);
  EXPECT_EQ(udm2x2(2, 3), 6u);
}

TEST(ApproxMultiplierTest, FourBitExhaustiveAgainstFlatOracle) {
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      ASSERT_EQ(approx_mul_significand(a, b, SignificandWidth(4)),
                oracle::approx_product(a, b, 4))
          << a << ' ' << b;
    }
  }
  EXPECT_EQ(approx_mul_significand(0b0101, 0b0101, SignificandWidth(4)), 25u);
  // 15 x 15: AH*BH exact (9 << 4), the other three blocks hit (3,3).
  EXPECT_EQ(approx_mul_significand(15, 15, SignificandWidth(4)), 7u + (14u << 2) + (9u << 4));
}

TEST(ApproxMultiplierTest, WiderWidthsAgainstFlatOracle) {
  for (int w = 2; w <= 8; ++w) {
    for (std::uint64_t a = 0; a < (1u << w); ++a) {
      for (std::uint64_t b = 0; b < (1u << w); ++b) {
        ASSERT_EQ(approx_mul_significand(a, b, SignificandWidth(w)),
                  oracle::approx_product(a, b, w))
            << w << ' ' << a << ' ' << b;
      }
    }
  }
  std::mt19937 rng(41);
  for (int i = 0; i < 500000; ++i) {
    const std::uint64_t a = rng() & 0x7FF, b = rng() & 0x7FF;
    ASSERT_EQ(approx_mul_significand(a, b, SignificandWidth(11)),
              oracle::approx_product(a, b, 11));
  }
}

TEST(ApproxMultiplierTest, DirectionalityMatchesFixture) {
  const auto rows = oracle::read_csv(kFixtures + "/approx_mul_directionality.csv");
  ASSERT_GE(rows.size(), 2u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int w = std::stoi(rows[i][0]);
    std::uint64_t below = 0, equal = 0, above = 0, shortfall = 0;
    for (std::uint64_t a = 0; a < (1u << w); ++a) {
      for (std::uint64_t b = 0; b < (1u << w); ++b) {
        const std::uint64_t p = approx_mul_significand(a, b, SignificandWidth(w));
        if (p < a * b) {
          ++below;
          shortfall = std::max(shortfall, a * b - p);
        } else if (p == a * b) {
          ++equal;
        } else {
          ++above;
        }
      }
    }
    EXPECT_EQ(below, std::stoull(rows[i][2])) << w;
    EXPECT_EQ(equal, std::stoull(rows[i][3])) << w;
    EXPECT_EQ(above, std::stoull(rows[i][4])) << w;
    EXPECT_EQ(shortfall, std::stoull(rows[i][5])) << w;
  }
}

TEST(ApproxMultiplierTest, ZeroAnnihilates) {
  for (std::uint64_t a = 0; a < 2048; ++a) {
    ASSERT_EQ(approx_mul_significand(a, 0, SignificandWidth(11)), 0u);
    ASSERT_EQ(approx_mul_significand(0, a, SignificandWidth(11)), 0u);
  }
}

TEST(ApproxFloatTest, AdditiveIdentityAndSpecials) {
  std::mt19937 rng(43);
  for (int i = 0; i < 100000; ++i) {
    const Binary16 a(static_cast<std::uint16_t>(rng()));
    if (is_nan(a)) continue;
    ASSERT_EQ(add_approx(a, Binary16(0x0000)), add_exact(a, Binary16(0x0000)));
  }
  EXPECT_EQ(add_approx(Binary16(0x3C00), Binary16(0x0000)).bits, 0x3C00);
  EXPECT_TRUE(is_nan(add_approx(Binary16(0x7C00), Binary16(0xFC00))));
  EXPECT_TRUE(is_nan(mul_approx(Binary16(0x0000), Binary16(0xFC00))));
  EXPECT_EQ(mul_approx(Binary16(0x7C00), Binary16(0x3C00)).bits, 0x7C00);
}

TEST(ApproxFloatTest, MultiplyByOneWhereNoCellTriggers) {
  // 1.0 has significand 0b100'0000'0000, so every low-side digit is 0 and
  // the top digit is 2; (3,3) can never occur.
  for (std::uint32_t b = 0; b <= 0xFFFF; ++b) {
    const Binary16 x(static_cast<std::uint16_t>(b));
    if (is_nan(x)) continue;
    ASSERT_EQ(mul_approx(Binary16(0x3C00), x), mul_exact(Binary16(0x3C00), x))
        << to_hex(x);
  }
}

// Same datapath with the approximate significand units: finite results must
// round exactly like the exact datapath would round the approximate
// significand value.
std::uint16_t approx_add_oracle(std::uint16_t a, std::uint16_t b) {
  const double va = oracle::half_value(a), vb = oracle::half_value(b);
  if (std::isnan(va) || std::isnan(vb) || std::isinf(va) || std::isinf(vb) ||
      va == 0.0 || vb == 0.0) {
    return oracle::half_add(a, b);
  }
  // Significands with hidden bit and the scale of the lowest bit.
  auto split = [](std::uint16_t h, std::int64_t& sig, int& scale) {
    const int e = (h >> 10) & 0x1F;
    sig = (h & 0x3FF) | (e ? 0x400 : 0);
    scale = (e ? e : 1) - 25;
  };
  std::int64_t sa, sb;
  int ea, eb;
  split(a, sa, ea);
  split(b, sb, eb);
  bool neg_a = a >> 15, neg_b = b >> 15;
  // Order by magnitude; the larger operand keeps its scale.
  if (ea < eb || (ea == eb && sa < sb)) {
    std::swap(sa, sb);
    std::swap(ea, eb);
    std::swap(neg_a, neg_b);
  }
  // Three extra bits below the big operand's lsb; the rest is sticky.
  const int shift = ea - eb;
  const std::int64_t big = sa << 3;
  std::int64_t small = sb << 3;
  if (shift > 0) {
    const bool sticky = shift >= 62 || (small & ((std::int64_t{1} << shift) - 1)) != 0;
    small = shift >= 62 ? 0 : (small >> shift);
    small |= sticky ? 1 : 0;
  }
  const std::int64_t top_big = big >> 3, top_small = small >> 3;
  const std::int64_t guard_small = small & 7;
  std::int64_t magnitude;
  bool negative = neg_a;
  if (neg_a == neg_b) {
    const auto s = static_cast<std::int64_t>(
        oracle::truncated_add(static_cast<std::uint64_t>(top_big),
                              static_cast<std::uint64_t>(top_small), 11));
    magnitude = (s << 3) | guard_small;
  } else {
    // big + ~small + carry, through the same truncating adder.
    const std::uint64_t mask = 0x7FF;
    const std::uint64_t inv = ~static_cast<std::uint64_t>(top_small) & mask;
    const bool cin = guard_small == 0;
    const std::uint64_t low_m = 0x1F;
    const std::uint64_t low = (static_cast<std::uint64_t>(top_big) & low_m) + (inv & low_m) + cin;
    const std::uint64_t c_low = low >> 5;
    const std::uint64_t full =
        static_cast<std::uint64_t>(top_big) + inv + cin - (c_low << 5);
    const std::int64_t diff = static_cast<std::int64_t>(full) - 2048;
    magnitude = diff * 8 + ((8 - guard_small) & 7);
    if (magnitude < 0) {
      magnitude = -magnitude;
      negative = !negative;
    }
  }
  if (magnitude == 0) return 0x0000;
  // magnitude counts units of 2^(ea - 3); this is exact in double.
  const double value = std::ldexp(static_cast<double>(magnitude), ea - 3);
  return oracle::nearest_half(negative ? -value : value);
}

TEST(ApproxFloatTest, AddMatchesDatapathOracle) {
  std::mt19937 rng(47);
  int differing = 0;
  for (int i = 0; i < 1000000; ++i) {
    const auto a = static_cast<std::uint16_t>(rng());
    const auto b = static_cast<std::uint16_t>(rng());
    const Binary16 got = add_approx(Binary16(a), Binary16(b));
    ASSERT_EQ(got.bits, approx_add_oracle(a, b)) << std::hex << a << ' ' << b;
    if (got != add_exact(Binary16(a), Binary16(b))) ++differing;
  }
  EXPECT_GT(differing, 0);
}

TEST(ApproxFloatTest, MulMatchesDatapathOracle) {
  std::mt19937 rng(53);
  for (int i = 0; i < 1000000; ++i) {
    const auto a = static_cast<std::uint16_t>(rng());
    const auto b = static_cast<std::uint16_t>(rng());
    const double va = oracle::half_value(a), vb = oracle::half_value(b);
    std::uint16_t want;
    if (std::isnan(va) || std::isnan(vb) || std::isinf(va) || std::isinf(vb) ||
        va == 0.0 || vb == 0.0) {
      want = oracle::half_mul(a, b);
    } else {
      auto sig = [](std::uint16_t h) -> std::uint64_t {
        const int e = (h >> 10) & 0x1F;
        return (h & 0x3FF) | (e ? 0x400 : 0);
      };
      auto scale = [](std::uint16_t h) {
        const int e = (h >> 10) & 0x1F;
        return (e ? e : 1) - 25;
      };
      const std::uint64_t p = oracle::approx_product(sig(a), sig(b), 11);
      const double v = std::ldexp(static_cast<double>(p), scale(a) + scale(b));
      want = oracle::nearest_half(((a ^ b) & 0x8000) ? -v : v);
      if (p == 0) want = (a ^ b) & 0x8000;
    }
    ASSERT_EQ(mul_approx(Binary16(a), Binary16(b)).bits, want)
        << std::hex << a << ' ' << b;
  }
}

TEST(ApproxFloatTest, MulNeverExceedsExactMagnitude) {
  std::mt19937 rng(59);
  for (int i = 0; i < 300000; ++i) {
    const Binary16 a(static_cast<std::uint16_t>(rng() & 0x7FFF));
    const Binary16 b(static_cast<std::uint16_t>(rng() & 0x7FFF));
    if (!is_finite(a) || !is_finite(b)) continue;
    ASSERT_LE(decode_half(mul_approx(a, b)), decode_half(mul_exact(a, b)));
  }
}

}  // namespace
}  // namespace approxdet
