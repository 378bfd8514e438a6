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

#include "approxdet/kernels.h"

#include <algorithm>
#include <stdexcept>
#include <thread>
#include <vector>

namespace approxdet {
namespace {

std::vector<Binary16> to_half(const Tensor& t) {
  std::vector<Binary16> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = quantize_32_to_16(t[i]);
  return out;
}

// Runs body(row_begin, row_end, stats) over `rows`, split into contiguous
// chunks; per-chunk stats are merged in chunk order.
template <typename Body>
FaultStats for_rows(std::size_t rows, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::max<std::size_t>(rows, 1))));
  std::vector<FaultStats> partial(threads);
  if (threads == 1) {
    body(std::size_t{0}, rows, partial[0]);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (rows + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(rows, t * chunk);
      const std::size_t end = std::min(rows, begin + chunk);
      workers.emplace_back([&, begin, end, t] { body(begin, end, partial[t]); });
    }
  }
  FaultStats total;
  for (const FaultStats& s : partial) total += s;
  return total;
}

void check_operand(const Tensor& t, const char* name) {
  if (t.rank() != 2) {
    throw ShapeError(std::string("gemm operand ") + name + " must be 2-D, got " +
                     shape_to_string(t.shape()));
  }
  if (t.has_nan()) {
    throw std::invalid_argument(std::string("gemm operand ") + name +
                                " contains NaN");
  }
}

}  // namespace

Tensor quantize_for(const Tensor& t, Setup setup) {
  if (!is_half_setup(setup)) return t;
  Tensor out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] = widen_16_to_32(quantize_32_to_16(t[i]));
  }
  return out;
}

Tensor gemm(const Tensor& a, const Tensor& b, const ArithmeticConfig& cfg,
            KernelContext* ctx) {
  cfg.validate();
  check_operand(a, "A");
  check_operand(b, "B");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw ShapeError("gemm inner dimensions differ: " + shape_to_string(a.shape()) +
                     " x " + shape_to_string(b.shape()));
  }

  Tensor c({m, n});
  const std::uint64_t layer = ctx ? ctx->layer : 0;
  const unsigned threads = ctx ? ctx->threads : 1;
  FaultStats stats;

  if (k == 0) return c;

  if (cfg.setup == Setup::kExact32) {
    for_rows(m, threads, [&](std::size_t r0, std::size_t r1, FaultStats&) {
      for (std::size_t i = r0; i < r1; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          Binary32 acc = mul_exact32(a[i * k], b[j]);
          for (std::size_t p = 1; p < k; ++p) {
            acc = add_exact32(acc, mul_exact32(a[i * k + p], b[p * n + j]));
          }
          c[i * n + j] = acc;
        }
      }
    });
  } else {
    const std::vector<Binary16> ha = to_half(a);
    const std::vector<Binary16> hb = to_half(b);
    const HalfOps base = half_ops(cfg.setup);
    const bool faulty = cfg.setup == Setup::kApprox16Fault;
    stats = for_rows(m, threads, [&](std::size_t r0, std::size_t r1,
                                     FaultStats& local) {
      for (std::size_t i = r0; i < r1; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          Binary16 acc;
          if (faulty) {
            FaultInjectingOps ops(base, cfg.fault, cell_stream(layer, i * n + j));
            acc = ops.mul(ha[i * k], hb[j]);
            for (std::size_t p = 1; p < k; ++p) {
              acc = ops.add(acc, ops.mul(ha[i * k + p], hb[p * n + j]));
            }
            local += ops.stats();
          } else {
            acc = base.mul(ha[i * k], hb[j]);
            for (std::size_t p = 1; p < k; ++p) {
              acc = base.add(acc, base.mul(ha[i * k + p], hb[p * n + j]));
            }
          }
          c[i * n + j] = widen_16_to_32(acc);
        }
      }
    });
  }
  if (ctx) ctx->stats += stats;
  return c;
}

Tensor im2col(const Tensor& input, std::size_t kernel_h, std::size_t kernel_w,
              const Conv2dParams& params) {
  if (input.rank() != 3) {
    throw ShapeError("conv input must be [C x H x W], got " +
                     shape_to_string(input.shape()));
  }
  if (params.stride == 0 || kernel_h == 0 || kernel_w == 0) {
    throw ShapeError("conv stride and kernel size must be positive");
  }
  const std::size_t channels = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t ph = h + 2 * params.padding, pw = w + 2 * params.padding;
  if (ph < kernel_h || pw < kernel_w) {
    throw ShapeError("conv kernel larger than padded input");
  }
  const std::size_t oh = (ph - kernel_h) / params.stride + 1;
  const std::size_t ow = (pw - kernel_w) / params.stride + 1;

  Tensor cols({channels * kernel_h * kernel_w, oh * ow});
  const std::size_t ncols = oh * ow;
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t ky = 0; ky < kernel_h; ++ky) {
      for (std::size_t kx = 0; kx < kernel_w; ++kx) {
        const std::size_t row = (c * kernel_h + ky) * kernel_w + kx;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          for (std::size_t ox = 0; ox < ow; ++ox) {
            const std::ptrdiff_t y = static_cast<std::ptrdiff_t>(oy * params.stride + ky) -
                                     static_cast<std::ptrdiff_t>(params.padding);
            const std::ptrdiff_t x = static_cast<std::ptrdiff_t>(ox * params.stride + kx) -
                                     static_cast<std::ptrdiff_t>(params.padding);
            Binary32 v;
            if (y >= 0 && x >= 0 && y < static_cast<std::ptrdiff_t>(h) &&
                x < static_cast<std::ptrdiff_t>(w)) {
              v = input[(c * h + static_cast<std::size_t>(y)) * w +
                        static_cast<std::size_t>(x)];
            }
            cols[row * ncols + oy * ow + ox] = v;
          }
        }
      }
    }
  }
  return cols;
}

Tensor conv2d(const Tensor& input, const Tensor& kernel,
              const Conv2dParams& params, const ArithmeticConfig& cfg,
              KernelContext* ctx) {
  if (kernel.rank() != 4) {
    throw ShapeError("conv kernel must be [O x C x KH x KW], got " +
                     shape_to_string(kernel.shape()));
  }
  if (input.rank() != 3 || kernel.dim(1) != input.dim(0)) {
    throw ShapeError("conv channel mismatch: input " +
                     shape_to_string(input.shape()) + ", kernel " +
                     shape_to_string(kernel.shape()));
  }
  const std::size_t out_ch = kernel.dim(0), kh = kernel.dim(2), kw = kernel.dim(3);
  const Tensor cols = im2col(input, kh, kw, params);
  const std::size_t oh =
      (input.dim(1) + 2 * params.padding - kh) / params.stride + 1;
  const std::size_t ow =
      (input.dim(2) + 2 * params.padding - kw) / params.stride + 1;
  const Tensor weights = kernel.reshaped({out_ch, kernel.size() / out_ch});
  return gemm(weights, cols, cfg, ctx).reshaped({out_ch, oh, ow});
}

Tensor relu(const Tensor& t) {
  Tensor out = t;
  for (Binary32& v : out.data()) {
    if (v.sign() && !is_nan(v)) v = Binary32{};
  }
  return out;
}

}  // namespace approxdet
