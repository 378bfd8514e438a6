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

#include "approxdet/arithmetic.h"

#include <cstdio>
#include <stdexcept>

#include "approxdet/approx_units.h"

namespace approxdet {

std::string_view setup_name(Setup setup) {
  switch (setup) {
    case Setup::kExact32:
      return "32full";
    case Setup::kExact16:
      return "16full";
    case Setup::kApprox16:
      return "16approx";
    case Setup::kApprox16Fault:
      return "16appfault";
  }
  return "unknown";
}

Setup parse_setup(std::string_view name) {
  for (Setup s : kAllSetups) {
    if (setup_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown arithmetic setup '" + std::string(name) +
                              "' (expected 32full, 16full, 16approx or "
                              "16appfault)");
}

void ArithmeticConfig::validate() const {
  fault.validate();
  if (setup != Setup::kApprox16Fault && (fault.p_faulty != 0.0 || fault.site)) {
    throw std::invalid_argument("fault parameters require the 16appfault setup");
  }
}

std::string ArithmeticConfig::describe() const {
  std::string out(setup_name(setup));
  if (setup == Setup::kApprox16Fault) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(p=%g,seed=%llu)", fault.p_faulty,
                  static_cast<unsigned long long>(fault.seed));
    out += buf;
  }
  return out;
}

HalfOps half_ops(Setup setup) {
  switch (setup) {
    case Setup::kExact16:
      return {&add_exact, &mul_exact};
    case Setup::kApprox16:
    case Setup::kApprox16Fault:
      return {&add_approx, &mul_approx};
    case Setup::kExact32:
      break;
  }
  throw std::invalid_argument("32full has no binary16 operators");
}

FaultInjectingOps::FaultInjectingOps(HalfOps base, const FaultModel& model,
                                     std::uint64_t stream)
    : base_(base), stream_(model, stream) {}

Binary16 FaultInjectingOps::add(Binary16 a, Binary16 b) {
  return maybe_corrupt(base_.add(a, b), stream_).value;
}

Binary16 FaultInjectingOps::mul(Binary16 a, Binary16 b) {
  return maybe_corrupt(base_.mul(a, b), stream_).value;
}

FaultInjectingOps wrap_arithmetic(Setup mode, const FaultModel& model,
                                  std::uint64_t stream) {
  model.validate();
  return FaultInjectingOps(half_ops(mode), model, stream);
}

}  // namespace approxdet
