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

#include "approxdet/softfloat.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "approxdet/detail/datapath.h"

namespace approxdet {
namespace {

template <detail::FloatFormat F>
FloatClass classify_impl(F x) {
  using Fl = detail::Fields<F>;
  if (Fl::exp(x) == Fl::kMaxExp) {
    return Fl::frac(x) != 0 ? FloatClass::kNaN : FloatClass::kInfinity;
  }
  if (Fl::exp(x) == 0) {
    return Fl::frac(x) != 0 ? FloatClass::kSubnormal : FloatClass::kZero;
  }
  return FloatClass::kNormal;
}

template <detail::FloatFormat F>
double decode_impl(F x) {
  using Fl = detail::Fields<F>;
  const double sign = Fl::sign(x) ? -1.0 : 1.0;
  switch (classify_impl(x)) {
    case FloatClass::kNaN:
      return std::numeric_limits<double>::quiet_NaN();
    case FloatClass::kInfinity:
      return sign * std::numeric_limits<double>::infinity();
    case FloatClass::kZero:
      return sign * 0.0;
    default:
      break;
  }
  const int exponent = Fl::effective_exp(x) - Fl::kBias - Fl::kFrac;
  return sign * std::ldexp(static_cast<double>(Fl::significand(x)), exponent);
}

// Reads the double's own bit fields and rounds them into F.
template <detail::FloatFormat F>
F encode_impl(double x) {
  using Fl = detail::Fields<F>;
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const bool sign = (bits >> 63) != 0;
  const auto exp = static_cast<int>((bits >> 52) & 0x7FF);
  const std::uint64_t frac = bits & ((std::uint64_t{1} << 52) - 1);
  if (exp == 0x7FF) return frac != 0 ? Fl::nan() : Fl::inf(sign);
  if (exp == 0 && frac == 0) return Fl::zero(sign);
  const std::uint64_t sig = exp != 0 ? (frac | (std::uint64_t{1} << 52)) : frac;
  const int effective = exp != 0 ? exp : 1;
  return detail::round_pack<F>(sign, effective - 1023 - 52, sig);
}

template <detail::FloatFormat To, detail::FloatFormat From>
To convert(From x) {
  using Src = detail::Fields<From>;
  using Dst = detail::Fields<To>;
  if (Src::is_nan(x)) return Dst::nan();
  if (Src::is_inf(x)) return Dst::inf(Src::sign(x));
  if (Src::is_zero(x)) return Dst::zero(Src::sign(x));
  return detail::round_pack<To>(Src::sign(x),
                                Src::effective_exp(x) - Src::kBias - Src::kFrac,
                                Src::significand(x));
}

std::uint64_t parse_hex(const std::string& text, int max_bits) {
  std::size_t pos = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &pos, 16);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a hex bit pattern: '" + text + "'");
  }
  if (pos != text.size() || (value >> max_bits) != 0) {
    throw std::invalid_argument("not a " + std::to_string(max_bits) +
                                "-bit hex pattern: '" + text + "'");
  }
  return value;
}

}  // namespace

FloatClass classify(Binary16 x) { return classify_impl(x); }
FloatClass classify(Binary32 x) { return classify_impl(x); }

double decode_half(Binary16 x) { return decode_impl(x); }
double decode_single(Binary32 x) { return decode_impl(x); }

Binary16 encode_half(double x, RoundingMode) { return encode_impl<Binary16>(x); }
Binary32 encode_single(double x, RoundingMode) {
  return encode_impl<Binary32>(x);
}

Binary16 quantize_32_to_16(Binary32 x, RoundingMode) {
  return convert<Binary16>(x);
}

Binary32 widen_16_to_32(Binary16 x) { return convert<Binary32>(x); }

Binary16 add_exact(Binary16 a, Binary16 b) {
  return detail::add(a, b, ExactSignificandAdder{});
}
Binary16 mul_exact(Binary16 a, Binary16 b) {
  return detail::mul(a, b, ExactSignificandMultiplier{});
}
Binary32 add_exact32(Binary32 a, Binary32 b) {
  return detail::add(a, b, ExactSignificandAdder{});
}
Binary32 mul_exact32(Binary32 a, Binary32 b) {
  return detail::mul(a, b, ExactSignificandMultiplier{});
}

std::string to_hex(Binary16 x) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "0x%04X", static_cast<unsigned>(x.bits));
  return buf;
}

std::string to_hex(Binary32 x) {
  char buf[12];
  std::snprintf(buf, sizeof(buf), "0x%08X", static_cast<unsigned>(x.bits));
  return buf;
}

Binary16 half_from_hex(const std::string& text) {
  return Binary16(static_cast<std::uint16_t>(parse_hex(text, 16)));
}

Binary32 single_from_hex(const std::string& text) {
  return Binary32(static_cast<std::uint32_t>(parse_hex(text, 32)));
}

}  // namespace approxdet
