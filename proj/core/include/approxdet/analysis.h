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

// Secondary analyses over a matched evaluation: confidence histograms of
// hits vs misdetections, detection rate by object area, and merging of
// vehicle sub-classes.

#ifndef APPROXDET_ANALYSIS_H_
#define APPROXDET_ANALYSIS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "approxdet/detection.h"
#include "approxdet/metrics.h"

namespace approxdet {

struct ConfidenceHistogram {
  std::vector<double> edges;  // bins + 1 edges over [0, 1]
  std::vector<std::size_t> tp;
  std::vector<std::size_t> fp;
  std::vector<std::size_t> fn;
  // Missed objects whose reference carries no confidence (labelled data).
  std::size_t fn_unscored = 0;

  std::size_t bins() const { return tp.size(); }
};

// Bin k covers [k/bins, (k+1)/bins); the last bin also holds 1.0.
std::size_t confidence_bin(double confidence, std::size_t bins);

// TP and FP are binned by detection confidence, FN by the reference
// confidence of the missed object.
ConfidenceHistogram confidence_histogram(std::span<const Detection> dets,
                                         std::span<const GroundTruthObject> gts,
                                         const MatchResult& match,
                                         std::size_t bins = 10);

struct AreaBin {
  double lower = 0.0;  // inclusive
  double upper = 0.0;  // exclusive, except the last bin which includes 1
  std::size_t tp = 0;
  std::size_t fn = 0;
  // TP / (TP + FN) in percent; absent for empty bins.
  std::optional<double> tp_percent;
};

// Bin 0 collects areas below 10^-decades (including zero-area boxes);
// the rest are log-spaced, `per_decade` bins per decade up to 1.
struct AreaBinning {
  std::vector<AreaBin> bins;
  std::size_t per_decade = 10;
  std::size_t decades = 4;
};

std::size_t area_bin(double area_ratio, std::size_t decades,
                     std::size_t per_decade);

// Objects are placed by their ground-truth box area ratio.
AreaBinning area_analysis(std::span<const GroundTruthObject> gts,
                          const MatchResult& match, std::size_t decades = 4,
                          std::size_t per_decade = 10);

class ClassGeneralization {
 public:
  ClassGeneralization() = default;
  explicit ClassGeneralization(std::map<std::string, std::string> mapping);

  // car, truck, motorbike, bus -> Vehicle.
  static ClassGeneralization vehicles();

  const std::string& apply(const std::string& class_id) const;
  const std::map<std::string, std::string>& mapping() const { return mapping_; }

 private:
  std::map<std::string, std::string> mapping_;
};

struct EvaluationInputs {
  std::vector<Detection> detections;
  std::vector<GroundTruthObject> ground_truth;
};

// Relabels both sides before matching.
EvaluationInputs generalize_classes(std::span<const Detection> dets,
                                    std::span<const GroundTruthObject> gts,
                                    const ClassGeneralization& mapping);

void write_confidence_csv(std::ostream& out, const ConfidenceHistogram& h);
void write_area_csv(std::ostream& out, const AreaBinning& a);

}  // namespace approxdet

#endif  // APPROXDET_ANALYSIS_H_
