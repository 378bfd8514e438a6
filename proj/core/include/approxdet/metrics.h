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

// Detection matching, precision/recall, AP (all-point interpolation) and
// mAP (unweighted mean over classes).
//
// Matching, per class and frame: detections below the confidence threshold
// are discarded; the rest are visited in descending confidence (ties keep
// input order) and each takes the unmatched ground truth with the highest
// IoU, provided IoU >= t. Zero-area boxes never match.

#ifndef APPROXDET_METRICS_H_
#define APPROXDET_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "approxdet/detection.h"

namespace approxdet {

struct MatchParams {
  double iou_threshold = 0.5;
  double conf_threshold = 0.5;
};

struct MatchedPair {
  std::size_t detection = 0;
  std::size_t ground_truth = 0;
  double iou = 0.0;
};

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  ClassCounts& operator+=(const ClassCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  // Indexed like the input detections / ground truths.
  std::vector<bool> retained;
  std::vector<bool> detection_matched;
  std::vector<bool> gt_matched;
  std::vector<MatchedPair> pairs;
  // Retained detections in the order they were visited.
  std::vector<std::size_t> ranking;
  std::map<std::string, ClassCounts> per_class;
};

MatchResult match_detections(std::span<const Detection> dets,
                             std::span<const GroundTruthObject> gts,
                             const MatchParams& params = {});

struct PRPoint {
  double confidence = 0.0;
  bool true_positive = false;
  double precision = 0.0;
  double recall = 0.0;
};

struct PrecisionRecallCurve {
  std::string class_id;
  std::size_t ground_truths = 0;
  std::vector<PRPoint> points;  // descending confidence
};

// Cumulative P = TP/(TP+FP) and R = TP/(TP+FN) over a ranked TP/FP list.
// Requires ground_truths > 0.
PrecisionRecallCurve curve_from_ranking(const std::vector<bool>& ranked_tp,
                                        std::size_t ground_truths,
                                        std::string class_id = {});

// nullopt when the class has no ground truths (recall undefined).
std::optional<PrecisionRecallCurve> precision_recall_curve(
    std::span<const Detection> dets, std::span<const GroundTruthObject> gts,
    std::string_view class_id, const MatchParams& params = {});

// Sum over recall steps of (R_{n+1} - R_n) * max{P(R') : R' >= R_{n+1}}.
double average_precision(const PrecisionRecallCurve& curve);

struct APResult {
  std::map<std::string, double> ap;                   // classes with ground truth
  std::map<std::string, PrecisionRecallCurve> curves;
  std::vector<std::string> excluded_classes;          // detections but no ground truth
};

APResult evaluate_ap(std::span<const Detection> dets,
                     std::span<const GroundTruthObject> gts,
                     const MatchParams& params = {});
APResult evaluate_ap(std::span<const Detection> dets,
                     std::span<const GroundTruthObject> gts,
                     const MatchResult& match);

class EmptyClassSetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unweighted mean of the APs of `class_set` members that have an AP.
// Throws EmptyClassSetError when none do.
double mean_average_precision(const std::map<std::string, double>& ap_by_class,
                              std::span<const std::string> class_set);

std::vector<std::string> vehicle_class_set();
std::vector<std::string> vehicle_and_person_class_set();

}  // namespace approxdet

#endif  // APPROXDET_METRICS_H_
