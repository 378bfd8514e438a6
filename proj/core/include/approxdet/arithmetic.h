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

#ifndef APPROXDET_ARITHMETIC_H_
#define APPROXDET_ARITHMETIC_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "approxdet/fault.h"
#include "approxdet/softfloat.h"

namespace approxdet {

// The four evaluated arithmetic setups.
enum class Setup : std::uint8_t {
  kExact32,
  kExact16,
  kApprox16,
  kApprox16Fault,
};

inline constexpr std::array<Setup, 4> kAllSetups = {
    Setup::kExact32, Setup::kExact16, Setup::kApprox16, Setup::kApprox16Fault};

// "32full", "16full", "16approx", "16appfault".
std::string_view setup_name(Setup setup);
// Accepts the short names above; throws std::invalid_argument otherwise.
Setup parse_setup(std::string_view name);

inline bool is_half_setup(Setup s) { return s != Setup::kExact32; }

// Results are rounded after every operation; there is no wide accumulator.
struct ArithmeticConfig {
  Setup setup = Setup::kExact32;
  FaultModel fault;  // only consulted by kApprox16Fault

  static ArithmeticConfig exact32() { return {Setup::kExact32, {}}; }
  static ArithmeticConfig exact16() { return {Setup::kExact16, {}}; }
  static ArithmeticConfig approx16() { return {Setup::kApprox16, {}}; }
  static ArithmeticConfig approx16_fault(double p_faulty, std::uint64_t seed) {
    return {Setup::kApprox16Fault, {p_faulty, seed, std::nullopt}};
  }

  void validate() const;
  std::string describe() const;
};

using HalfBinaryOp = Binary16 (*)(Binary16, Binary16);

struct HalfOps {
  HalfBinaryOp add = nullptr;
  HalfBinaryOp mul = nullptr;
};

// Exact or approximate binary16 operators for a 16-bit setup; the fault
// setup maps to the approximate operators. Throws for kExact32.
HalfOps half_ops(Setup setup);

// Applies the wrapped operation, then corrupts the final rounded result.
class FaultInjectingOps {
 public:
  FaultInjectingOps(HalfOps base, const FaultModel& model,
                    std::uint64_t stream);

  Binary16 add(Binary16 a, Binary16 b);
  Binary16 mul(Binary16 a, Binary16 b);

  const FaultStats& stats() const { return stream_.stats(); }

 private:
  HalfOps base_;
  FaultStream stream_;
};

FaultInjectingOps wrap_arithmetic(Setup mode, const FaultModel& model,
                                  std::uint64_t stream = 0);

}  // namespace approxdet

#endif  // APPROXDET_ARITHMETIC_H_
