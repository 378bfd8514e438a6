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

#include "approxdet/workload.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "approxdet/fault.h"

namespace approxdet {
namespace {

struct Directive {
  std::vector<std::string> positional;
  std::map<std::string, std::string> options;
  std::vector<std::string> flags;
};

Directive tokenize(const std::string& line) {
  Directive d;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
      d.options[token.substr(0, eq)] = token.substr(eq + 1);
    } else if (!d.positional.empty() &&
               std::isalpha(static_cast<unsigned char>(token[0]))) {
      d.flags.push_back(token);
    } else {
      d.positional.push_back(token);
    }
  }
  return d;
}

class LineReader {
 public:
  LineReader(const Directive& d, int line) : d_(d), line_(line) {}

  std::size_t positive(std::size_t index, const char* what) const {
    if (index >= d_.positional.size()) fail(std::string("missing ") + what);
    const std::string& text = d_.positional[index];
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != text.size() || v == 0) {
      fail(std::string(what) + " must be a positive integer, got '" + text + "'");
    }
    return static_cast<std::size_t>(v);
  }

  template <typename T>
  T option(const std::string& key, T fallback) const {
    auto it = d_.options.find(key);
    if (it == d_.options.end()) return fallback;
    std::istringstream in(it->second);
    T v{};
    if (!(in >> v) || !in.eof()) fail("bad value for " + key + ": '" + it->second + "'");
    return v;
  }

  bool flag(const std::string& name) const {
    return std::find(d_.flags.begin(), d_.flags.end(), name) != d_.flags.end();
  }

  void check_known(std::initializer_list<const char*> keys,
                   std::initializer_list<const char*> flags) const {
    for (const auto& [key, value] : d_.options) {
      if (std::none_of(keys.begin(), keys.end(),
                       [&](const char* k) { return key == k; })) {
        fail("unknown option '" + key + "'");
      }
    }
    for (const std::string& f : d_.flags) {
      if (std::none_of(flags.begin(), flags.end(),
                       [&](const char* k) { return f == k; })) {
        fail("unknown flag '" + f + "'");
      }
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw WorkloadParseError(line_, message);
  }

 private:
  const Directive& d_;
  int line_;
};

// Shape of `input` as seen by a dense layer.
Shape dense_view(const Shape& input) {
  if (input.size() == 2) return input;
  return {element_count(input), 1};
}

Shape conv_output(const Shape& in, std::size_t out_ch, std::size_t k,
                  const Conv2dParams& p) {
  const std::size_t ph = in[1] + 2 * p.padding, pw = in[2] + 2 * p.padding;
  if (ph < k || pw < k) return {};
  return {out_ch, (ph - k) / p.stride + 1, (pw - k) / p.stride + 1};
}

}  // namespace

WorkloadParseError::WorkloadParseError(int line, const std::string& message)
    : std::runtime_error("workload line " + std::to_string(line) + ": " + message),
      line_(line) {}

Tensor random_tensor(Shape shape, std::uint64_t seed, float lo, float hi) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double u = static_cast<double>(hash_draw(seed, 0x7E45u, i) >> 11) * 0x1.0p-53;
    t[i] = Binary32::from_float(static_cast<float>(lo + (hi - lo) * u));
  }
  return t;
}

Workload parse_workload(std::istream& in) {
  Workload w;
  bool have_input = false;
  Shape current;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = raw.substr(0, raw.find('#'));
    const Directive d = tokenize(line);
    if (d.positional.empty()) continue;
    const LineReader r(d, line_no);
    const std::string& kind = d.positional[0];

    if (kind == "input") {
      if (have_input) r.fail("duplicate input directive");
      r.check_known({"seed", "lo", "hi"}, {});
      Shape shape;
      for (std::size_t i = 1; i < d.positional.size(); ++i) {
        shape.push_back(r.positive(i, "dimension"));
      }
      if (shape.empty()) r.fail("input needs at least one dimension");
      w.input = random_tensor(shape, r.option<std::uint64_t>("seed", 1),
                              r.option<float>("lo", -1.0f),
                              r.option<float>("hi", 1.0f));
      current = shape;
      have_input = true;
      continue;
    }
    if (!have_input) r.fail("'" + kind + "' before input directive");

    Layer layer;
    layer.relu = r.flag("relu");
    const auto seed = r.option<std::uint64_t>("seed", w.layers.size() + 101);
    if (kind == "dense") {
      r.check_known({"seed", "scale"}, {"relu"});
      const std::size_t out = r.positive(1, "output features");
      const Shape view = dense_view(current);
      const float scale = r.option<float>(
          "scale", 1.0f / std::sqrt(static_cast<float>(view[0])));
      layer.name = "dense" + std::to_string(w.layers.size());
      layer.op = DenseLayer{random_tensor({out, view[0]}, seed, -scale, scale)};
      current = {out, view[1]};
    } else if (kind == "conv") {
      r.check_known({"seed", "scale", "stride", "pad"}, {"relu"});
      if (current.size() != 3) r.fail("conv needs a [C x H x W] input");
      const std::size_t out = r.positive(1, "output channels");
      const std::size_t k = r.positive(2, "kernel size");
      Conv2dParams p;
      p.stride = r.option<std::size_t>("stride", 1);
      p.padding = r.option<std::size_t>("pad", 0);
      if (p.stride == 0) r.fail("stride must be positive");
      const std::size_t fan_in = current[0] * k * k;
      const float scale = r.option<float>(
          "scale", 1.0f / std::sqrt(static_cast<float>(fan_in)));
      const Shape next = conv_output(current, out, k, p);
      if (next.empty()) r.fail("kernel larger than padded input");
      layer.name = "conv" + std::to_string(w.layers.size());
      layer.op = ConvLayer{random_tensor({out, current[0], k, k}, seed, -scale, scale), p};
      current = next;
    } else {
      r.fail("unknown directive '" + kind + "'");
    }
    w.layers.push_back(std::move(layer));
  }
  if (!have_input) throw WorkloadParseError(line_no, "no input directive");
  return w;
}

Workload load_workload(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload " + path.string());
  return parse_workload(in);
}

WorkloadRun run_workload(const Workload& workload, const ArithmeticConfig& cfg,
                         unsigned threads) {
  WorkloadRun run;
  Tensor x = quantize_for(workload.input, cfg.setup);
  for (std::size_t i = 0; i < workload.layers.size(); ++i) {
    const Layer& layer = workload.layers[i];
    KernelContext ctx;
    ctx.layer = i + 1;
    ctx.threads = threads;
    if (const auto* dense = std::get_if<DenseLayer>(&layer.op)) {
      x = gemm(dense->weights, x.reshaped(dense_view(x.shape())), cfg, &ctx);
    } else {
      const auto& conv = std::get<ConvLayer>(layer.op);
      x = conv2d(x, conv.kernel, conv.params, cfg, &ctx);
    }
    if (layer.relu) x = relu(x);
    run.stats += ctx.stats;
    run.outputs.push_back(x);
  }
  return run;
}

double relative_deviation(Binary32 a, Binary32 b) {
  if (a == b) return 0.0;
  const double va = decode_single(a), vb = decode_single(b);
  if (!std::isfinite(va) || !std::isfinite(vb)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(va - vb) / std::max(std::abs(va), 0x1.0p-14);
}

std::vector<LayerDeviation> compare_runs(const Workload& workload,
                                         const WorkloadRun& a,
                                         const WorkloadRun& b) {
  std::vector<LayerDeviation> report;
  for (std::size_t i = 0; i < workload.layers.size(); ++i) {
    const Tensor& ta = a.outputs.at(i);
    const Tensor& tb = b.outputs.at(i);
    LayerDeviation d;
    d.name = workload.layers[i].name;
    d.cells = ta.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < ta.size(); ++j) {
      const double rel = relative_deviation(ta[j], tb[j]);
      if (ta[j] != tb[j]) ++d.affected_cells;
      d.max_relative = std::max(d.max_relative, rel);
      sum += rel;
    }
    if (d.cells) d.mean_relative = sum / static_cast<double>(d.cells);
    if (d.affected_cells) {
      d.mean_relative_affected = sum / static_cast<double>(d.affected_cells);
    }
    report.push_back(d);
  }
  return report;
}

std::vector<LayerDeviation> error_propagation_report(
    const ArithmeticConfig& cfg_a, const ArithmeticConfig& cfg_b,
    const Workload& workload) {
  return compare_runs(workload, run_workload(workload, cfg_a),
                      run_workload(workload, cfg_b));
}

}  // namespace approxdet
