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

// GEMM and 2-D convolution under a selectable arithmetic setup.
//
// Every output cell is a dot product accumulated left to right over K:
//   acc = a[0]*b[0]; acc = acc + a[k]*b[k] for k = 1..K-1
// with rounding after every operation. Each output cell owns the fault
// stream cell_stream(layer, cell), so results do not depend on threading.

#ifndef APPROXDET_KERNELS_H_
#define APPROXDET_KERNELS_H_

#include <cstddef>
#include <cstdint>

#include "approxdet/arithmetic.h"
#include "approxdet/fault.h"
#include "approxdet/tensor.h"

namespace approxdet {

struct KernelContext {
  std::uint64_t layer = 0;
  unsigned threads = 1;
  FaultStats stats;  // accumulated across calls
};

constexpr std::uint64_t cell_stream(std::uint64_t layer, std::uint64_t cell) {
  return (layer << 40) | cell;
}

// widen(quantize(x)) element-wise for 16-bit setups; identity for 32full.
Tensor quantize_for(const Tensor& t, Setup setup);

// a: [M x K], b: [K x N] -> [M x N]. Operands are quantized on entry for
// 16-bit setups. Throws ShapeError on mismatched shapes and
// std::invalid_argument on NaN inputs.
Tensor gemm(const Tensor& a, const Tensor& b, const ArithmeticConfig& cfg,
            KernelContext* ctx = nullptr);

struct Conv2dParams {
  std::size_t stride = 1;
  std::size_t padding = 0;
};

// input: [C x H x W] -> [C*KH*KW x OH*OW], zero padded. Row order is
// (c, ky, kx), column order is (oy, ox).
Tensor im2col(const Tensor& input, std::size_t kernel_h, std::size_t kernel_w,
              const Conv2dParams& params);

// input: [C x H x W], kernel: [O x C x KH x KW] -> [O x OH x OW], computed
// as gemm(kernel reshaped to [O x C*KH*KW], im2col(input)).
Tensor conv2d(const Tensor& input, const Tensor& kernel,
              const Conv2dParams& params, const ArithmeticConfig& cfg,
              KernelContext* ctx = nullptr);

// max(x, 0); sign-bit test only, so it is exact in every setup.
Tensor relu(const Tensor& t);

}  // namespace approxdet

#endif  // APPROXDET_KERNELS_H_
