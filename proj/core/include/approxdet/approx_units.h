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

// Approximate significand units and the binary16 operations built on them.
//
// Adder: the carry out of the low half (floor(W/2) bits) is dropped and
// never reaches the high half. Multiplier: operands are split into high
// and low halves; AH*BH is exact, the other three blocks are composed from
// underdesigned 2x2 cells (exact except 3*3 -> 7).

#ifndef APPROXDET_APPROX_UNITS_H_
#define APPROXDET_APPROX_UNITS_H_

#include <array>
#include <cstdint>

#include "approxdet/detail/datapath.h"
#include "approxdet/softfloat.h"

namespace approxdet {

// Bit width of a significand datapath. The low half is floor(W/2) bits.
class SignificandWidth {
 public:
  // Hidden bit + 10 fraction bits.
  static constexpr int kHalfDefault = 11;

  constexpr SignificandWidth() = default;
  explicit SignificandWidth(int bits);

  constexpr int bits() const { return bits_; }
  constexpr int low_bits() const { return bits_ / 2; }
  constexpr int high_bits() const { return bits_ - bits_ / 2; }

 private:
  int bits_ = kHalfDefault;
};

enum class ApproxAdderMode : std::uint8_t { kCarryTruncated };

struct ApproxAdderSpec {
  ApproxAdderMode mode = ApproxAdderMode::kCarryTruncated;
  SignificandWidth width;
};

enum class BlockKind : std::uint8_t { kExact, kApproximate };

// Which of the four half-by-half blocks use approximate cells.
struct ApproxMultiplierSpec {
  BlockKind low_low = BlockKind::kApproximate;
  BlockKind high_low = BlockKind::kApproximate;
  BlockKind low_high = BlockKind::kApproximate;
  BlockKind high_high = BlockKind::kExact;
};

struct ApproxAddResult {
  std::uint64_t sum = 0;       // W bits
  bool carry_out = false;      // carry out of the high half
  bool dropped_carry = false;  // carry out of the low half that was discarded
};

// a, b < 2^W. The sum equals a + b + carry_in - dropped_carry * 2^floor(W/2).
ApproxAddResult approx_add_significand(std::uint64_t a, std::uint64_t b,
                                       const ApproxAdderSpec& spec,
                                       bool carry_in = false);

// The underdesigned 2x2 multiplier cell; inputs are masked to 2 bits.
std::uint32_t udm2x2(std::uint32_t a, std::uint32_t b);

// Row-major 4x4 truth table, index a * 4 + b.
std::array<std::uint32_t, 16> udm2x2_table();

// All-approximate recursive block built from udm2x2 cells. Odd widths are
// zero-extended to the next even width before halving.
std::uint64_t approx_block_product(std::uint64_t a, std::uint64_t b, int width);

// a, b < 2^W; returns an up-to-2W-bit product.
std::uint64_t approx_mul_significand(std::uint64_t a, std::uint64_t b,
                                     SignificandWidth width,
                                     const ApproxMultiplierSpec& spec = {});

struct ApproxSignificandAdder {
  SignificandSum operator()(std::uint64_t a, std::uint64_t b, bool carry_in,
                            int width) const;
};

struct ApproxSignificandMultiplier {
  ApproxMultiplierSpec spec;
  std::uint64_t operator()(std::uint64_t a, std::uint64_t b, int width) const;
};

// Same datapath as add_exact / mul_exact with the significand core swapped.
Binary16 add_approx(Binary16 a, Binary16 b);
Binary16 mul_approx(Binary16 a, Binary16 b);

}  // namespace approxdet

#endif  // APPROXDET_APPROX_UNITS_H_
