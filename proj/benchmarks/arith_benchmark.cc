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

#include <benchmark/benchmark.h>

#include <vector>

#include "approxdet/approx_units.h"
#include "approxdet/arithmetic.h"
#include "approxdet/kernels.h"
#include "approxdet/softfloat.h"
#include "approxdet/workload.h"

namespace {

using approxdet::Binary16;

std::vector<Binary16> operands(std::size_t n) {
  std::vector<Binary16> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(approxdet::encode_half(0.25 + 0.75 * static_cast<double>(i % 97) / 97.0,
                                       approxdet::RoundingMode::kNearestEven));
  }
  return v;
}

template <Binary16 (*Op)(Binary16, Binary16)>
void BM_HalfOp(benchmark::State& state) {
  const auto v = operands(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Op(v[i & 1023], v[(i + 7) & 1023]));
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HalfOp<approxdet::add_exact>);
BENCHMARK(BM_HalfOp<approxdet::add_approx>);
BENCHMARK(BM_HalfOp<approxdet::mul_exact>);
BENCHMARK(BM_HalfOp<approxdet::mul_approx>);

void BM_FaultInjectingMul(benchmark::State& state) {
  const auto v = operands(1024);
  auto ops = approxdet::wrap_arithmetic(approxdet::Setup::kApprox16Fault,
                                        {1e-3, 7, std::nullopt});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ops.mul(v[i & 1023], v[(i + 7) & 1023]));
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FaultInjectingMul);

void BM_Gemm(benchmark::State& state) {
  const auto setup = static_cast<approxdet::Setup>(state.range(0));
  const std::size_t n = static_cast<std::size_t>(state.range(1));
  const auto a = approxdet::random_tensor({n, n}, 1, -1.0f, 1.0f);
  const auto b = approxdet::random_tensor({n, n}, 2, -1.0f, 1.0f);
  approxdet::ArithmeticConfig cfg{setup, {}};
  if (setup == approxdet::Setup::kApprox16Fault) cfg.fault = {1e-4, 3, std::nullopt};
  for (auto _ : state) {
    benchmark::DoNotOptimize(approxdet::gemm(a, b, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
  state.SetLabel(std::string(approxdet::setup_name(setup)));
}
BENCHMARK(BM_Gemm)->ArgsProduct({{0, 1, 2, 3}, {32}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
