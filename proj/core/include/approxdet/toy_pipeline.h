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

// A desk-scale detection pipeline whose convolutions and GEMMs run under a
// selectable arithmetic setup.
//
// Scenes are grid images: each cell may hold one object whose pixels carry
// a class-specific channel signature plus Gaussian noise. The score
// network is
//
//   conv 3x3 (C -> F1, pad 1) + ReLU      random weights
//   conv PxP stride P (F1 -> F2) + ReLU   random weights, one output per cell
//   dense (F2 + 1 -> classes)             ridge-regression readout
//
// The readout is fitted once, in double precision, on separate
// calibration scenes. The detector reports, for every cell, the
// highest-scoring class with confidence clamp(score, 0, 1) and the cell as
// its box.

#ifndef APPROXDET_TOY_PIPELINE_H_
#define APPROXDET_TOY_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "approxdet/arithmetic.h"
#include "approxdet/detection.h"
#include "approxdet/fault.h"
#include "approxdet/tensor.h"

namespace approxdet {

struct ToyPipelineParams {
  std::size_t scenes = 24;
  std::size_t grid = 8;            // cells per side
  std::size_t cell_pixels = 4;     // pixels per cell side
  std::size_t hidden_channels = 8;
  std::size_t cell_features = 64;
  double object_probability = 0.45;
  double noise_sigma = 0.2;
  // Probability that an object persists into the next scene, which turns
  // the scene list into a video-like sequence. 0 gives independent scenes.
  double persistence = 0.0;
  std::size_t calibration_scenes = 32;
  double ridge_lambda = 1e-2;
  std::uint64_t seed = 2024;

  void validate() const;
};

// Car, truck, bus, motorbike, person.
const std::vector<std::string>& toy_classes();

struct ToyScene {
  std::int64_t frame = 0;
  Tensor image;  // [C x H x W]
  std::vector<GroundTruthObject> objects;
};

struct ToyRun {
  std::vector<Detection> detections;  // every cell, unthresholded
  FaultStats stats;
};

class ToyPipeline {
 public:
  explicit ToyPipeline(ToyPipelineParams params);

  const ToyPipelineParams& params() const { return params_; }
  const std::vector<ToyScene>& scenes() const { return scenes_; }
  std::vector<GroundTruthObject> ground_truth() const;
  std::vector<std::int64_t> frames() const;

  // Scene s draws faults from layer namespaces 4*s + 1 .. 4*s + 3.
  ToyRun run(const ArithmeticConfig& cfg, unsigned threads = 1) const;
  std::vector<Detection> detect(const ToyScene& scene, std::size_t scene_index,
                                const ArithmeticConfig& cfg,
                                FaultStats* stats = nullptr,
                                unsigned threads = 1) const;

  // Raw class scores [classes x cells] for one scene.
  Tensor scores(const ToyScene& scene, std::size_t scene_index,
                const ArithmeticConfig& cfg, FaultStats* stats = nullptr,
                unsigned threads = 1) const;

 private:
  Tensor cell_features(const ToyScene& scene, std::size_t scene_index,
                       const ArithmeticConfig& cfg, FaultStats* stats,
                       unsigned threads) const;
  std::vector<ToyScene> make_scenes(std::size_t count, std::uint64_t seed) const;
  void fit_readout();

  ToyPipelineParams params_;
  Tensor conv1_;
  Tensor conv2_;
  Tensor readout_;  // [classes x (F2 + 1)]
  std::vector<ToyScene> scenes_;
};

}  // namespace approxdet

#endif  // APPROXDET_TOY_PIPELINE_H_
