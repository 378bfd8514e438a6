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

#include "approxdet/toy_pipeline.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "approxdet/kernels.h"
#include "approxdet/workload.h"

namespace approxdet {
namespace {

constexpr std::size_t kChannels = 4;

// Channel signatures; car and truck are deliberately close.
constexpr double kSignatures[5][kChannels] = {
    {1.0, 0.2, 0.6, 0.0},   // car
    {0.9, 0.35, 0.7, 0.15}, // truck
    {0.0, 1.0, 0.3, 0.5},   // bus
    {0.3, 0.0, 1.0, 0.8},   // motorbike
    {0.2, 0.7, 0.0, 1.0},   // person
};

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  double uniform() {
    return static_cast<double>(hash_draw(seed_, stream_, counter_++) >> 11) *
           0x1.0p-53;
  }
  // Box-Muller; the second variate is discarded.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

BoundingBox cell_box(std::size_t gx, std::size_t gy, std::size_t grid) {
  const double g = static_cast<double>(grid);
  return {static_cast<double>(gx) / g, static_cast<double>(gy) / g,
          static_cast<double>(gx + 1) / g, static_cast<double>(gy + 1) / g};
}

}  // namespace

void ToyPipelineParams::validate() const {
  if (scenes == 0 || grid == 0 || cell_pixels == 0 || hidden_channels == 0 ||
      cell_features == 0) {
    throw std::invalid_argument("toy pipeline sizes must be positive");
  }
  if (!(object_probability >= 0.0 && object_probability <= 1.0) ||
      !(persistence >= 0.0 && persistence <= 1.0)) {
    throw std::invalid_argument("toy pipeline probabilities must lie in [0, 1]");
  }
  if (!(noise_sigma >= 0.0) || !(ridge_lambda > 0.0)) {
    throw std::invalid_argument("toy pipeline needs noise >= 0 and ridge > 0");
  }
  if (calibration_scenes == 0) {
    throw std::invalid_argument("toy pipeline needs calibration scenes");
  }
}

const std::vector<std::string>& toy_classes() {
  static const std::vector<std::string> kClasses = {"car", "truck", "bus",
                                                    "motorbike", "person"};
  return kClasses;
}

ToyPipeline::ToyPipeline(ToyPipelineParams params) : params_(params) {
  params_.validate();
  const std::size_t f1 = params_.hidden_channels, f2 = params_.cell_features;
  const std::size_t p = params_.cell_pixels;
  const float a1 = static_cast<float>(1.0 / std::sqrt(kChannels * 9.0));
  const float a2 = static_cast<float>(2.0 / std::sqrt(static_cast<double>(f1 * p * p)));
  conv1_ = random_tensor({f1, kChannels, 3, 3}, params_.seed ^ 0xC011, -a1, a1);
  conv2_ = random_tensor({f2, f1, p, p}, params_.seed ^ 0xC022, -a2, a2);
  scenes_ = make_scenes(params_.scenes, params_.seed);
  fit_readout();
}

std::vector<ToyScene> ToyPipeline::make_scenes(std::size_t count,
                                               std::uint64_t seed) const {
  const std::size_t grid = params_.grid, p = params_.cell_pixels;
  const std::size_t side = grid * p;
  const std::size_t n_classes = toy_classes().size();
  std::vector<ToyScene> scenes;
  std::vector<int> previous(grid * grid, -1);
  for (std::size_t s = 0; s < count; ++s) {
    Rng rng(seed, 0x5CE0000 + s);
    std::vector<int> layout(grid * grid, -1);
    for (std::size_t c = 0; c < layout.size(); ++c) {
      if (previous[c] >= 0 && rng.uniform() < params_.persistence) {
        layout[c] = previous[c];
      } else if (rng.uniform() < params_.object_probability) {
        layout[c] = static_cast<int>(rng.below(n_classes));
      }
    }
    ToyScene scene;
    scene.frame = static_cast<std::int64_t>(s);
    std::vector<float> pixels(kChannels * side * side);
    for (std::size_t gy = 0; gy < grid; ++gy) {
      for (std::size_t gx = 0; gx < grid; ++gx) {
        const int cls = layout[gy * grid + gx];
        const double amplitude = cls >= 0 ? 0.6 + 0.8 * rng.uniform() : 0.0;
        for (std::size_t ch = 0; ch < kChannels; ++ch) {
          const double base = cls >= 0 ? amplitude * kSignatures[cls][ch] : 0.0;
          for (std::size_t y = gy * p; y < (gy + 1) * p; ++y) {
            for (std::size_t x = gx * p; x < (gx + 1) * p; ++x) {
              pixels[(ch * side + y) * side + x] =
                  static_cast<float>(base + params_.noise_sigma * rng.normal());
            }
          }
        }
        if (cls >= 0) {
          scene.objects.push_back(
              {toy_classes()[static_cast<std::size_t>(cls)], cell_box(gx, gy, grid),
               scene.frame, std::nullopt});
        }
      }
    }
    scene.image = Tensor::from_floats({kChannels, side, side}, pixels);
    scenes.push_back(std::move(scene));
    previous = std::move(layout);
  }
  return scenes;
}

Tensor ToyPipeline::cell_features(const ToyScene& scene, std::size_t scene_index,
                                  const ArithmeticConfig& cfg, FaultStats* stats,
                                  unsigned threads) const {
  const std::size_t cells = params_.grid * params_.grid;
  KernelContext ctx;
  ctx.threads = threads;
  ctx.layer = 4 * scene_index + 1;
  Tensor h = relu(conv2d(scene.image, conv1_, {1, 1}, cfg, &ctx));
  ctx.layer = 4 * scene_index + 2;
  Tensor f = relu(conv2d(h, conv2_, {params_.cell_pixels, 0}, cfg, &ctx));
  if (stats) *stats += ctx.stats;
  // Append a constant row for the readout bias.
  const std::size_t f2 = params_.cell_features;
  Tensor out({f2 + 1, cells});
  for (std::size_t i = 0; i < f2 * cells; ++i) out[i] = f[i];
  for (std::size_t c = 0; c < cells; ++c) out[f2 * cells + c] = Binary32::from_float(1.0f);
  return out;
}

void ToyPipeline::fit_readout() {
  const std::size_t k = params_.cell_features + 1;
  const std::size_t n_classes = toy_classes().size();
  const std::size_t cells = params_.grid * params_.grid;
  const auto calibration =
      make_scenes(params_.calibration_scenes, params_.seed ^ 0xCA11B0000ULL);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                               static_cast<Eigen::Index>(k));
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                static_cast<Eigen::Index>(n_classes));
  for (std::size_t s = 0; s < calibration.size(); ++s) {
    const Tensor f =
        cell_features(calibration[s], s, ArithmeticConfig::exact32(), nullptr, 1);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(cells), static_cast<Eigen::Index>(k));
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cells),
                                              static_cast<Eigen::Index>(n_classes));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < cells; ++c) {
        x(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) =
            f.value(r * cells + c);
      }
    }
    for (const GroundTruthObject& g : calibration[s].objects) {
      const auto gx = static_cast<std::size_t>(g.box.x_min * params_.grid + 0.5);
      const auto gy = static_cast<std::size_t>(g.box.y_min * params_.grid + 0.5);
      const auto cls = std::find(toy_classes().begin(), toy_classes().end(), g.class_id) -
                       toy_classes().begin();
      y(static_cast<Eigen::Index>(gy * params_.grid + gx), cls) = 1.0;
    }
    gram += x.transpose() * x;
    cross += x.transpose() * y;
  }
  gram += params_.ridge_lambda * Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  const Eigen::MatrixXd w = gram.ldlt().solve(cross);  // [k x classes]
  readout_ = Tensor({n_classes, k});
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t r = 0; r < k; ++r) {
      readout_[c * k + r] = Binary32::from_float(static_cast<float>(
          w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
    }
  }
}

Tensor ToyPipeline::scores(const ToyScene& scene, std::size_t scene_index,
                           const ArithmeticConfig& cfg, FaultStats* stats,
                           unsigned threads) const {
  const Tensor f = cell_features(scene, scene_index, cfg, stats, threads);
  KernelContext ctx;
  ctx.threads = threads;
  ctx.layer = 4 * scene_index + 3;
  Tensor out = gemm(readout_, f, cfg, &ctx);
  if (stats) *stats += ctx.stats;
  return out;
}

std::vector<Detection> ToyPipeline::detect(const ToyScene& scene,
                                           std::size_t scene_index,
                                           const ArithmeticConfig& cfg,
                                           FaultStats* stats,
                                           unsigned threads) const {
  const Tensor s = scores(scene, scene_index, cfg, stats, threads);
  const std::size_t cells = params_.grid * params_.grid;
  const std::size_t n_classes = toy_classes().size();
  std::vector<Detection> out;
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t k = 0; k < n_classes; ++k) {
      const double v = s.value(k * cells + c);
      // A NaN score never wins.
      if (v > best_score) {
        best_score = v;
        best = k;
      }
    }
    out.push_back({toy_classes()[best], std::clamp(best_score, 0.0, 1.0),
                   cell_box(c % params_.grid, c / params_.grid, params_.grid),
                   scene.frame});
  }
  return out;
}

ToyRun ToyPipeline::run(const ArithmeticConfig& cfg, unsigned threads) const {
  ToyRun r;
  for (std::size_t s = 0; s < scenes_.size(); ++s) {
    auto dets = detect(scenes_[s], s, cfg, &r.stats, threads);
    r.detections.insert(r.detections.end(), dets.begin(), dets.end());
  }
  return r;
}

std::vector<GroundTruthObject> ToyPipeline::ground_truth() const {
  std::vector<GroundTruthObject> out;
  for (const ToyScene& s : scenes_) {
    out.insert(out.end(), s.objects.begin(), s.objects.end());
  }
  return out;
}

std::vector<std::int64_t> ToyPipeline::frames() const {
  std::vector<std::int64_t> out;
  for (const ToyScene& s : scenes_) out.push_back(s.frame);
  return out;
}

}  // namespace approxdet
