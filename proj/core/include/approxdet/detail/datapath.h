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

// Shared floating-point datapath. Exact and approximate operations differ
// only in the significand adder / multiplier passed in here.

#ifndef APPROXDET_DETAIL_DATAPATH_H_
#define APPROXDET_DETAIL_DATAPATH_H_

#include <bit>
#include <concepts>
#include <cstdint>
#include <utility>

#include "approxdet/softfloat.h"

namespace approxdet {

// Result of a W-bit significand addition. `sum` holds the low W bits.
struct SignificandSum {
  std::uint64_t sum = 0;
  bool carry_out = false;
};

template <typename A>
concept SignificandAdder =
    requires(const A& adder, std::uint64_t x, std::uint64_t y, bool cin,
             int width) {
      { adder(x, y, cin, width) } -> std::same_as<SignificandSum>;
    };

template <typename M>
concept SignificandMultiplier =
    requires(const M& mul, std::uint64_t x, std::uint64_t y, int width) {
      { mul(x, y, width) } -> std::same_as<std::uint64_t>;
    };

struct ExactSignificandAdder {
  SignificandSum operator()(std::uint64_t a, std::uint64_t b, bool carry_in,
                            int width) const {
    const std::uint64_t full = a + b + (carry_in ? 1u : 0u);
    return {full & ((std::uint64_t{1} << width) - 1), ((full >> width) & 1) != 0};
  }
};

struct ExactSignificandMultiplier {
  std::uint64_t operator()(std::uint64_t a, std::uint64_t b, int) const {
    return a * b;
  }
};

namespace detail {

template <typename F>
concept FloatFormat = requires {
  typename F::Storage;
  { F::kExponentBits } -> std::convertible_to<int>;
  { F::kFractionBits } -> std::convertible_to<int>;
  { F::kBias } -> std::convertible_to<int>;
};

template <FloatFormat F>
struct Fields {
  static constexpr int kFrac = F::kFractionBits;
  static constexpr int kExp = F::kExponentBits;
  static constexpr int kBias = F::kBias;
  static constexpr int kSignificandWidth = kFrac + 1;
  static constexpr std::uint64_t kFracMask = (std::uint64_t{1} << kFrac) - 1;
  static constexpr std::uint64_t kHidden = std::uint64_t{1} << kFrac;
  static constexpr std::uint32_t kMaxExp = (1u << kExp) - 1;

  static constexpr bool sign(F x) { return (x.bits >> (kExp + kFrac)) & 1; }
  static constexpr std::uint32_t exp(F x) {
    return static_cast<std::uint32_t>((x.bits >> kFrac) & kMaxExp);
  }
  static constexpr std::uint64_t frac(F x) { return x.bits & kFracMask; }
  static constexpr bool is_nan(F x) { return exp(x) == kMaxExp && frac(x) != 0; }
  static constexpr bool is_inf(F x) { return exp(x) == kMaxExp && frac(x) == 0; }
  static constexpr bool is_zero(F x) { return exp(x) == 0 && frac(x) == 0; }

  static constexpr F pack(bool s, std::uint64_t e, std::uint64_t f) {
    using S = typename F::Storage;
    return F(static_cast<S>((std::uint64_t{s} << (kExp + kFrac)) |
                            (e << kFrac) | f));
  }
  static constexpr F zero(bool s) { return pack(s, 0, 0); }
  static constexpr F inf(bool s) { return pack(s, kMaxExp, 0); }
  static constexpr F nan() {
    return pack(false, kMaxExp, std::uint64_t{1} << (kFrac - 1));
  }

  // Significand with hidden bit, and the effective (unbiased-ready)
  // exponent: subnormals share the exponent of the smallest normal.
  static constexpr std::uint64_t significand(F x) {
    return exp(x) != 0 ? (frac(x) | kHidden) : frac(x);
  }
  static constexpr int effective_exp(F x) {
    return exp(x) != 0 ? static_cast<int>(exp(x)) : 1;
  }
};

// Right shift that ORs every shifted-out bit into bit 0.
constexpr std::uint64_t shift_right_jam(std::uint64_t x, int n) {
  if (n <= 0) return x;
  if (n >= 64) return x != 0 ? 1 : 0;
  const std::uint64_t lost = x & ((std::uint64_t{1} << n) - 1);
  return (x >> n) | (lost != 0 ? 1 : 0);
}

// Rounds sign * magnitude * 2^scale to the nearest-even value of F.
// Requires magnitude != 0.
template <FloatFormat F>
constexpr F round_pack(bool sign, int scale, std::uint64_t magnitude) {
  using Fl = Fields<F>;
  constexpr int kGuard = 3;
  constexpr int kTop = Fl::kFrac + kGuard;

  const int msb = std::bit_width(magnitude) - 1;
  const int shift = msb - kTop;
  if (shift > 0) {
    magnitude = shift_right_jam(magnitude, shift);
  } else {
    magnitude <<= -shift;
  }
  scale += shift;

  int biased = scale + kTop + Fl::kBias;
  if (biased <= 0) {
    magnitude = shift_right_jam(magnitude, 1 - biased);
    biased = 0;
  }

  const std::uint64_t round_bits = magnitude & 0x7;
  magnitude >>= kGuard;
  if (round_bits > 4 || (round_bits == 4 && (magnitude & 1))) ++magnitude;

  if (biased == 0) {
    if (magnitude >> Fl::kFrac) biased = 1;
  } else if (magnitude >> (Fl::kFrac + 1)) {
    magnitude >>= 1;
    ++biased;
  }
  if (biased >= static_cast<int>(Fl::kMaxExp)) return Fl::inf(sign);
  return Fl::pack(sign, static_cast<std::uint64_t>(biased),
                  magnitude & Fl::kFracMask);
}

template <FloatFormat F, SignificandAdder Adder>
F add(F a, F b, const Adder& adder) {
  using Fl = Fields<F>;
  if (Fl::is_nan(a) || Fl::is_nan(b)) return Fl::nan();
  if (Fl::is_inf(a)) {
    if (Fl::is_inf(b) && Fl::sign(a) != Fl::sign(b)) return Fl::nan();
    return a;
  }
  if (Fl::is_inf(b)) return b;
  if (Fl::is_zero(a) && Fl::is_zero(b)) {
    return Fl::zero(Fl::sign(a) && Fl::sign(b));
  }
  if (Fl::is_zero(a)) return b;
  if (Fl::is_zero(b)) return a;

  std::uint64_t big_sig = Fl::significand(a);
  std::uint64_t small_sig = Fl::significand(b);
  int big_exp = Fl::effective_exp(a);
  int small_exp = Fl::effective_exp(b);
  bool sign = Fl::sign(a);
  const bool subtract = Fl::sign(a) != Fl::sign(b);
  if (big_exp < small_exp || (big_exp == small_exp && big_sig < small_sig)) {
    std::swap(big_sig, small_sig);
    std::swap(big_exp, small_exp);
    sign = Fl::sign(b);
  }

  constexpr int kWidth = Fl::kSignificandWidth;
  constexpr std::uint64_t kMask = (std::uint64_t{1} << kWidth) - 1;
  // Three extra bits (guard, round, sticky) below the significand. The
  // larger operand has zeros there, so only the aligned significand bits
  // pass through the adder.
  const std::uint64_t small_ext = shift_right_jam(small_sig << 3, big_exp - small_exp);
  const std::uint64_t small_top = small_ext >> 3;
  const std::uint64_t guard = small_ext & 0x7;

  std::int64_t extended;
  if (!subtract) {
    const SignificandSum s = adder(big_sig, small_top, false, kWidth);
    const std::uint64_t full = s.sum | (std::uint64_t{s.carry_out} << kWidth);
    extended = static_cast<std::int64_t>((full << 3) | guard);
  } else {
    // big - small as big + ~small + 1 on the extended register; the +1
    // enters at the guard bits and only reaches the significand adder as a
    // carry-in when the guard bits are all zero.
    const SignificandSum s =
        adder(big_sig, ~small_top & kMask, guard == 0, kWidth);
    const std::uint64_t full = s.sum + (std::uint64_t{s.carry_out} << kWidth);
    const std::int64_t diff =
        static_cast<std::int64_t>(full) - (std::int64_t{1} << kWidth);
    extended = diff * 8 + static_cast<std::int64_t>((8 - guard) & 0x7);
  }
  if (extended == 0) return Fl::zero(false);
  if (extended < 0) {
    sign = !sign;
    extended = -extended;
  }
  return round_pack<F>(sign, big_exp - Fl::kBias - Fl::kFrac - 3,
                       static_cast<std::uint64_t>(extended));
}

template <FloatFormat F, SignificandMultiplier Mul>
F mul(F a, F b, const Mul& multiplier) {
  using Fl = Fields<F>;
  const bool sign = Fl::sign(a) != Fl::sign(b);
  if (Fl::is_nan(a) || Fl::is_nan(b)) return Fl::nan();
  if (Fl::is_inf(a) || Fl::is_inf(b)) {
    if (Fl::is_zero(a) || Fl::is_zero(b)) return Fl::nan();
    return Fl::inf(sign);
  }
  if (Fl::is_zero(a) || Fl::is_zero(b)) return Fl::zero(sign);

  const std::uint64_t product =
      multiplier(Fl::significand(a), Fl::significand(b), Fl::kSignificandWidth);
  if (product == 0) return Fl::zero(sign);
  const int scale = (Fl::effective_exp(a) - Fl::kBias - Fl::kFrac) +
                    (Fl::effective_exp(b) - Fl::kBias - Fl::kFrac);
  return round_pack<F>(sign, scale, product);
}

}  // namespace detail
}  // namespace approxdet

#endif  // APPROXDET_DETAIL_DATAPATH_H_
