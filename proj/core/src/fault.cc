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

#include "approxdet/fault.h"

#include <stdexcept>
#include <string>

namespace approxdet {
namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Top 53 bits as a uniform double in [0, 1).
double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

void FaultModel::validate() const {
  if (!(p_faulty >= 0.0 && p_faulty <= 1.0)) {
    throw std::invalid_argument("p_faulty must lie in [0, 1], got " +
                                std::to_string(p_faulty));
  }
  if (site && (site->bit < 0 || site->bit >= kHalfMantissaBits)) {
    throw std::invalid_argument("forced fault bit outside the mantissa: " +
                                std::to_string(site->bit));
  }
}

FaultStats& FaultStats::operator+=(const FaultStats& other) {
  results_produced += other.results_produced;
  faults_injected += other.faults_injected;
  for (std::size_t i = 0; i < bit_histogram.size(); ++i) {
    bit_histogram[i] += other.bit_histogram[i];
  }
  return *this;
}

std::uint64_t hash_draw(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter) {
  return mix(mix(seed + kGolden) ^ mix(stream * kGolden + 0x632BE59BD9B4E019ull) ^
             (counter * kGolden));
}

FaultStream::FaultStream(const FaultModel& model, std::uint64_t stream)
    : model_(&model), stream_(stream) {}

FaultStream::Decision FaultStream::next() {
  const std::uint64_t op = op_index_++;
  ++stats_.results_produced;
  Decision d;
  if (model_->site) {
    const FaultSite& site = *model_->site;
    if (site.stream == stream_ && site.op_index == op) {
      d.inject = true;
      d.bit = site.bit;
    }
    return d;
  }
  if (model_->p_faulty <= 0.0) return d;
  const std::uint64_t draw = hash_draw(model_->seed, stream_, op);
  if (to_unit(draw) < model_->p_faulty) {
    d.inject = true;
    const std::uint64_t pick = mix(draw ^ kGolden);
    d.bit = static_cast<int>(((pick >> 32) * kHalfMantissaBits) >> 32);
  }
  return d;
}

void FaultStream::record(const Decision& d) {
  if (!d.inject) return;
  ++stats_.faults_injected;
  ++stats_.bit_histogram[static_cast<std::size_t>(d.bit)];
}

Binary16 flip_mantissa_bit(Binary16 x, int bit) {
  if (bit < 0 || bit >= kHalfMantissaBits) {
    throw std::out_of_range("mantissa bit index out of range: " +
                            std::to_string(bit));
  }
  return Binary16(static_cast<std::uint16_t>(x.bits ^ (1u << bit)));
}

CorruptResult maybe_corrupt(Binary16 result, FaultStream& stream) {
  const FaultStream::Decision d = stream.next();
  stream.record(d);
  if (!d.inject) return {result, false};
  return {flip_mantissa_bit(result, d.bit), true};
}

}  // namespace approxdet
