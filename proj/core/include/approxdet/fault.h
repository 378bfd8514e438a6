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

// Single-bit mantissa fault injection on binary16 results.
//
// Random draws are a pure function of (seed, stream, op index), so any
// partition of the work into streams reproduces the same fault pattern.

#ifndef APPROXDET_FAULT_H_
#define APPROXDET_FAULT_H_

#include <array>
#include <cstdint>
#include <optional>

#include "approxdet/softfloat.h"

namespace approxdet {

inline constexpr int kHalfMantissaBits = Binary16::kFractionBits;

// Forces a fault at exactly one operation instead of sampling p_faulty.
struct FaultSite {
  std::uint64_t stream = 0;
  std::uint64_t op_index = 0;
  int bit = kHalfMantissaBits - 1;
};

struct FaultModel {
  double p_faulty = 0.0;
  std::uint64_t seed = 0;
  std::optional<FaultSite> site;

  // Throws std::invalid_argument unless p_faulty is in [0, 1] and a forced
  // bit index lies in the mantissa.
  void validate() const;
};

struct FaultStats {
  std::uint64_t results_produced = 0;
  std::uint64_t faults_injected = 0;
  std::array<std::uint64_t, kHalfMantissaBits> bit_histogram{};

  FaultStats& operator+=(const FaultStats& other);
  friend bool operator==(const FaultStats&, const FaultStats&) = default;
};

// 64-bit mixing of three words; a counter-based generator.
std::uint64_t hash_draw(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter);

// Per-worker draw state. Each stream is an independent substream.
class FaultStream {
 public:
  FaultStream(const FaultModel& model, std::uint64_t stream);

  std::uint64_t stream() const { return stream_; }
  std::uint64_t op_index() const { return op_index_; }
  const FaultStats& stats() const { return stats_; }
  const FaultModel& model() const { return *model_; }

  struct Decision {
    bool inject = false;
    int bit = 0;
  };
  // Advances the op counter and samples this result's fate.
  Decision next();
  void record(const Decision& d);

 private:
  const FaultModel* model_;
  std::uint64_t stream_;
  std::uint64_t op_index_ = 0;
  FaultStats stats_;
};

struct CorruptResult {
  Binary16 value;
  bool fault_occurred = false;
};

// Inverts mantissa bit `bit` (0 = least significant).
Binary16 flip_mantissa_bit(Binary16 x, int bit);

// With probability p_faulty, flips one uniformly chosen mantissa bit.
CorruptResult maybe_corrupt(Binary16 result, FaultStream& stream);

}  // namespace approxdet

#endif  // APPROXDET_FAULT_H_
