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

// Layered workloads and per-layer error propagation between two setups.
//
// Text format, one directive per line, '#' starts a comment:
//
//   input 3 16 16 seed=7 lo=-1 hi=1
//   conv 8 3 stride=1 pad=1 seed=11 relu   # out_channels kernel_size
//   dense 16 seed=3 relu                    # out_features
//
// Weights are uniform in [-scale, scale], scale defaulting to
// 1/sqrt(fan_in). `dense` multiplies a [in x N] input, or flattens any
// other input to [numel x 1].

#ifndef APPROXDET_WORKLOAD_H_
#define APPROXDET_WORKLOAD_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "approxdet/arithmetic.h"
#include "approxdet/kernels.h"
#include "approxdet/tensor.h"

namespace approxdet {

class WorkloadParseError : public std::runtime_error {
 public:
  WorkloadParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Uniform values in [lo, hi) drawn from the counter-based generator.
Tensor random_tensor(Shape shape, std::uint64_t seed, float lo, float hi);

struct DenseLayer {
  Tensor weights;  // [out x in]
};

struct ConvLayer {
  Tensor kernel;  // [O x C x KH x KW]
  Conv2dParams params;
};

struct Layer {
  std::string name;
  std::variant<DenseLayer, ConvLayer> op;
  bool relu = false;
};

struct Workload {
  Tensor input;
  std::vector<Layer> layers;
};

Workload parse_workload(std::istream& in);
Workload load_workload(const std::filesystem::path& path);

struct WorkloadRun {
  std::vector<Tensor> outputs;  // one per layer
  FaultStats stats;
};

// Layer i draws faults from streams cell_stream(i + 1, cell).
WorkloadRun run_workload(const Workload& workload, const ArithmeticConfig& cfg,
                         unsigned threads = 1);

struct LayerDeviation {
  std::string name;
  std::size_t cells = 0;
  std::size_t affected_cells = 0;  // bit patterns differ
  double max_relative = 0.0;
  double mean_relative = 0.0;      // over all cells
  double mean_relative_affected = 0.0;  // over affected cells only
};

// |a - b| / max(|a|, 2^-14); +inf when exactly one side is non-finite.
double relative_deviation(Binary32 a, Binary32 b);

std::vector<LayerDeviation> compare_runs(const Workload& workload,
                                         const WorkloadRun& a,
                                         const WorkloadRun& b);

std::vector<LayerDeviation> error_propagation_report(
    const ArithmeticConfig& cfg_a, const ArithmeticConfig& cfg_b,
    const Workload& workload);

}  // namespace approxdet

#endif  // APPROXDET_WORKLOAD_H_
