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

#include <stdexcept>
#include <string>

namespace approxdet {
namespace {

constexpr std::uint64_t mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

constexpr int even_width(int width) { return width + (width & 1); }

}  // namespace

SignificandWidth::SignificandWidth(int bits) : bits_(bits) {
  if (bits < 2 || bits > 31) {
    throw std::invalid_argument("significand width must be in [2, 31], got " +
                                std::to_string(bits));
  }
}

ApproxAddResult approx_add_significand(std::uint64_t a, std::uint64_t b,
                                       const ApproxAdderSpec& spec,
                                       bool carry_in) {
  const int width = spec.width.bits();
  const int low_bits = spec.width.low_bits();
  a &= mask(width);
  b &= mask(width);

  const std::uint64_t low = (a & mask(low_bits)) + (b & mask(low_bits)) +
                            (carry_in ? 1 : 0);
  const std::uint64_t high = (a >> low_bits) + (b >> low_bits);

  ApproxAddResult result;
  result.dropped_carry = (low >> low_bits) != 0;
  const std::uint64_t full = (high << low_bits) | (low & mask(low_bits));
  result.sum = full & mask(width);
  result.carry_out = ((full >> width) & 1) != 0;
  return result;
}

std::uint32_t udm2x2(std::uint32_t a, std::uint32_t b) {
  a &= 0x3;
  b &= 0x3;
  if (a == 3 && b == 3) return 7;
  return a * b;
}

std::array<std::uint32_t, 16> udm2x2_table() {
  std::array<std::uint32_t, 16> table{};
  for (std::uint32_t a = 0; a < 4; ++a) {
    for (std::uint32_t b = 0; b < 4; ++b) table[a * 4 + b] = udm2x2(a, b);
  }
  return table;
}

std::uint64_t approx_block_product(std::uint64_t a, std::uint64_t b,
                                   int width) {
  if (width <= 2) return udm2x2(static_cast<std::uint32_t>(a),
                                static_cast<std::uint32_t>(b));
  const int half = even_width(width) / 2;
  const std::uint64_t al = a & mask(half), ah = a >> half;
  const std::uint64_t bl = b & mask(half), bh = b >> half;
  return approx_block_product(al, bl, half) +
         ((approx_block_product(ah, bl, half) +
           approx_block_product(al, bh, half))
          << half) +
         (approx_block_product(ah, bh, half) << (2 * half));
}

std::uint64_t approx_mul_significand(std::uint64_t a, std::uint64_t b,
                                     SignificandWidth width,
                                     const ApproxMultiplierSpec& spec) {
  const int half = even_width(width.bits()) / 2;
  a &= mask(width.bits());
  b &= mask(width.bits());
  const std::uint64_t al = a & mask(half), ah = a >> half;
  const std::uint64_t bl = b & mask(half), bh = b >> half;
  auto block = [half](BlockKind kind, std::uint64_t x, std::uint64_t y) {
    return kind == BlockKind::kExact ? x * y : approx_block_product(x, y, half);
  };
  return block(spec.low_low, al, bl) +
         ((block(spec.high_low, ah, bl) + block(spec.low_high, al, bh))
          << half) +
         (block(spec.high_high, ah, bh) << (2 * half));
}

SignificandSum ApproxSignificandAdder::operator()(std::uint64_t a,
                                                  std::uint64_t b,
                                                  bool carry_in,
                                                  int width) const {
  ApproxAdderSpec spec;
  spec.width = SignificandWidth(width);
  const ApproxAddResult r = approx_add_significand(a, b, spec, carry_in);
  return {r.sum, r.carry_out};
}

std::uint64_t ApproxSignificandMultiplier::operator()(std::uint64_t a,
                                                      std::uint64_t b,
                                                      int width) const {
  return approx_mul_significand(a, b, SignificandWidth(width), spec);
}

Binary16 add_approx(Binary16 a, Binary16 b) {
  return detail::add(a, b, ApproxSignificandAdder{});
}

Binary16 mul_approx(Binary16 a, Binary16 b) {
  return detail::mul(a, b, ApproxSignificandMultiplier{});
}

}  // namespace approxdet
