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

// Experiment orchestration. Two input modes:
//
//  * file mode: a candidate detection file is scored against either a
//    labelled file or a reference detector's output;
//  * toy mode (no candidate file): the synthetic pipeline is run under the
//    configured arithmetic and scored against its planted labels or
//    against its own 32full output.
//
// Either way the result is an EvalReport that depends only on the
// configuration and the inputs.

#ifndef APPROXDET_EXPERIMENT_H_
#define APPROXDET_EXPERIMENT_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "approxdet/arithmetic.h"
#include "approxdet/detection.h"
#include "approxdet/report.h"
#include "approxdet/toy_pipeline.h"

namespace approxdet {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ReferenceKind {
  kLabels,      // annotated ground truth
  kDetections,  // another configuration's detections
};

struct ExperimentConfig {
  Setup setup = Setup::kExact32;
  double p_faulty = 0.0;
  std::uint64_t seed = 0;
  double conf_threshold = 0.5;
  double iou_threshold = 0.5;
  bool fusion = false;
  bool generalize_vehicles = false;
  ReferenceKind reference_kind = ReferenceKind::kLabels;
  // File mode when non-empty; both must then be set.
  std::filesystem::path candidate;
  std::filesystem::path reference;
  ToyPipelineParams toy;
  unsigned threads = 1;

  bool toy_mode() const { return candidate.empty(); }
  // Throws ConfigError.
  void validate() const;
  ArithmeticConfig arithmetic() const;
  nlohmann::json to_json() const;
};

inline constexpr std::array<double, 4> kSweepProbabilities = {1e-6, 1e-5, 1e-4,
                                                              1e-3};

// Matching, AP/mAP and analyses of already-produced detections. With
// fusion on, `candidate` is fused per frame first; so is a detection
// reference. Reference confidences are kept on the ground truth side.
EvalReport evaluate_detections(const ExperimentConfig& cfg,
                               std::vector<Detection> candidate,
                               std::vector<GroundTruthObject> reference,
                               const std::vector<std::int64_t>& frames);

// Throws ConfigError for bad configuration and DataError for bad inputs.
EvalReport run_experiment(const ExperimentConfig& cfg);

// 32full, 16full, 16approx, then 16appfault at every probability.
std::vector<ExperimentConfig> sweep_configs(
    const ExperimentConfig& base,
    std::span<const double> probabilities = kSweepProbabilities);
std::vector<EvalReport> run_sweep(
    const ExperimentConfig& base,
    std::span<const double> probabilities = kSweepProbabilities);

}  // namespace approxdet

#endif  // APPROXDET_EXPERIMENT_H_
