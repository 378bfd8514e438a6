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

// Bit-exact IEEE754 binary16 / binary32 emulation.
//
// All arithmetic runs over unsigned integer bit fields with an explicit
// hidden bit; native float arithmetic is never used. The significand adder
// and multiplier are pluggable (see detail/datapath.h) so that approximate
// units can replace them without touching alignment, normalization,
// rounding or special-value handling.

#ifndef APPROXDET_SOFTFLOAT_H_
#define APPROXDET_SOFTFLOAT_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <string>

namespace approxdet {

enum class RoundingMode : std::uint8_t {
  kNearestEven,
};

// IEEE754 binary16: 1 sign bit, 5 exponent bits (bias 15), 10 fraction bits.
struct Binary16 {
  using Storage = std::uint16_t;
  static constexpr int kExponentBits = 5;
  static constexpr int kFractionBits = 10;
  static constexpr int kBias = 15;
  static constexpr int kWidth = 16;

  Storage bits = 0;

  constexpr Binary16() = default;
  constexpr explicit Binary16(Storage b) : bits(b) {}

  constexpr bool sign() const { return (bits >> 15) != 0; }
  constexpr std::uint32_t exponent() const { return (bits >> 10) & 0x1Fu; }
  constexpr std::uint32_t mantissa() const { return bits & 0x3FFu; }

  friend constexpr bool operator==(Binary16, Binary16) = default;
};

// IEEE754 binary32: 1 sign bit, 8 exponent bits (bias 127), 23 fraction bits.
// The bit pattern is interchangeable with the native 32-bit float.
struct Binary32 {
  using Storage = std::uint32_t;
  static constexpr int kExponentBits = 8;
  static constexpr int kFractionBits = 23;
  static constexpr int kBias = 127;
  static constexpr int kWidth = 32;

  Storage bits = 0;

  constexpr Binary32() = default;
  constexpr explicit Binary32(Storage b) : bits(b) {}

  static constexpr Binary32 from_float(float f) {
    return Binary32(std::bit_cast<Storage>(f));
  }
  constexpr float to_float() const { return std::bit_cast<float>(bits); }

  constexpr bool sign() const { return (bits >> 31) != 0; }
  constexpr std::uint32_t exponent() const { return (bits >> 23) & 0xFFu; }
  constexpr std::uint32_t mantissa() const { return bits & 0x7FFFFFu; }

  friend constexpr bool operator==(Binary32, Binary32) = default;
};

inline constexpr Binary16 kCanonicalNaN16{0x7E00};
inline constexpr Binary32 kCanonicalNaN32{0x7FC00000u};
inline constexpr Binary16 kHalfMax{0x7BFF};  // 65504

enum class FloatClass : std::uint8_t {
  kZero,
  kSubnormal,
  kNormal,
  kInfinity,
  kNaN,
};

FloatClass classify(Binary16 x);
FloatClass classify(Binary32 x);

inline bool is_nan(Binary16 x) { return classify(x) == FloatClass::kNaN; }
inline bool is_nan(Binary32 x) { return classify(x) == FloatClass::kNaN; }
inline bool is_finite(Binary16 x) { return x.exponent() != 0x1F; }
inline bool is_finite(Binary32 x) { return x.exponent() != 0xFF; }

// Exact value of any binary16 / binary32 pattern (double holds both
// formats exactly). NaN patterns decode to a quiet double NaN.
double decode_half(Binary16 x);
double decode_single(Binary32 x);

// Nearest representable value under `mode`; overflow saturates to
// infinity, values below half the smallest subnormal flush to signed zero.
Binary16 encode_half(double x, RoundingMode mode = RoundingMode::kNearestEven);
Binary32 encode_single(double x,
                       RoundingMode mode = RoundingMode::kNearestEven);

Binary16 quantize_32_to_16(Binary32 x,
                           RoundingMode mode = RoundingMode::kNearestEven);
// Exact; every binary16 value is representable in binary32.
Binary32 widen_16_to_32(Binary16 x);

// Correctly rounded IEEE754 operations.
Binary16 add_exact(Binary16 a, Binary16 b);
Binary16 mul_exact(Binary16 a, Binary16 b);
Binary32 add_exact32(Binary32 a, Binary32 b);
Binary32 mul_exact32(Binary32 a, Binary32 b);

// "0x3555" style formatting and parsing for fixtures.
std::string to_hex(Binary16 x);
std::string to_hex(Binary32 x);
Binary16 half_from_hex(const std::string& text);
Binary32 single_from_hex(const std::string& text);

}  // namespace approxdet

#endif  // APPROXDET_SOFTFLOAT_H_
