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

#include "approxdet/metrics.h"

#include <algorithm>
#include <set>
#include <tuple>

namespace approxdet {
namespace {

using GroupKey = std::tuple<std::string, std::int64_t>;

}  // namespace

MatchResult match_detections(std::span<const Detection> dets,
                             std::span<const GroundTruthObject> gts,
                             const MatchParams& params) {
  MatchResult r;
  r.retained.assign(dets.size(), false);
  r.detection_matched.assign(dets.size(), false);
  r.gt_matched.assign(gts.size(), false);

  std::map<GroupKey, std::vector<std::size_t>> gt_groups;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    gt_groups[{gts[g].class_id, gts[g].frame_id}].push_back(g);
    r.per_class[gts[g].class_id];
  }

  for (std::size_t d = 0; d < dets.size(); ++d) {
    if (dets[d].confidence >= params.conf_threshold) {
      r.retained[d] = true;
      r.ranking.push_back(d);
    }
  }
  std::stable_sort(r.ranking.begin(), r.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dets[a].confidence > dets[b].confidence;
                   });

  for (std::size_t d : r.ranking) {
    const Detection& det = dets[d];
    ClassCounts& counts = r.per_class[det.class_id];
    auto it = gt_groups.find({det.class_id, det.frame_id});
    std::size_t best = gts.size();
    double best_iou = -1.0;
    if (it != gt_groups.end() && det.box.area() > 0.0) {
      for (std::size_t g : it->second) {
        if (r.gt_matched[g] || gts[g].box.area() <= 0.0) continue;
        const double v = iou(det.box, gts[g].box);
        if (v > best_iou) {
          best_iou = v;
          best = g;
        }
      }
    }
    if (best < gts.size() && best_iou >= params.iou_threshold) {
      r.gt_matched[best] = true;
      r.detection_matched[d] = true;
      r.pairs.push_back({d, best, best_iou});
      ++counts.tp;
    } else {
      ++counts.fp;
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!r.gt_matched[g]) ++r.per_class[gts[g].class_id].fn;
  }
  for (const auto& [cls, counts] : r.per_class) {
    r.tp += counts.tp;
    r.fp += counts.fp;
    r.fn += counts.fn;
  }
  return r;
}

PrecisionRecallCurve curve_from_ranking(const std::vector<bool>& ranked_tp,
                                        std::size_t ground_truths,
                                        std::string class_id) {
  if (ground_truths == 0) {
    throw std::invalid_argument("recall is undefined without ground truths");
  }
  PrecisionRecallCurve curve;
  curve.class_id = std::move(class_id);
  curve.ground_truths = ground_truths;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < ranked_tp.size(); ++i) {
    if (ranked_tp[i]) ++tp;
    PRPoint p;
    p.true_positive = ranked_tp[i];
    p.precision = static_cast<double>(tp) / static_cast<double>(i + 1);
    p.recall = static_cast<double>(tp) / static_cast<double>(ground_truths);
    curve.points.push_back(p);
  }
  return curve;
}

namespace {

std::map<std::string, std::size_t> ground_truth_counts(
    std::span<const GroundTruthObject> gts) {
  std::map<std::string, std::size_t> n;
  for (const auto& g : gts) ++n[g.class_id];
  return n;
}

PrecisionRecallCurve class_curve(std::span<const Detection> dets,
                                 const MatchResult& match,
                                 const std::string& class_id,
                                 std::size_t ground_truths) {
  std::vector<bool> flags;
  std::vector<double> conf;
  for (std::size_t d : match.ranking) {
    if (dets[d].class_id != class_id) continue;
    flags.push_back(match.detection_matched[d]);
    conf.push_back(dets[d].confidence);
  }
  PrecisionRecallCurve curve = curve_from_ranking(flags, ground_truths, class_id);
  for (std::size_t i = 0; i < conf.size(); ++i) curve.points[i].confidence = conf[i];
  return curve;
}

}  // namespace

std::optional<PrecisionRecallCurve> precision_recall_curve(
    std::span<const Detection> dets, std::span<const GroundTruthObject> gts,
    std::string_view class_id, const MatchParams& params) {
  const auto counts = ground_truth_counts(gts);
  auto it = counts.find(std::string(class_id));
  if (it == counts.end()) return std::nullopt;
  const MatchResult match = match_detections(dets, gts, params);
  return class_curve(dets, match, it->first, it->second);
}

double average_precision(const PrecisionRecallCurve& curve) {
  if (curve.points.empty()) return 0.0;
  std::vector<double> recall{0.0}, precision{0.0};
  for (const PRPoint& p : curve.points) {
    recall.push_back(p.recall);
    precision.push_back(p.precision);
  }
  recall.push_back(1.0);
  precision.push_back(0.0);
  for (std::size_t i = precision.size() - 1; i-- > 0;) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }
  double ap = 0.0;
  for (std::size_t i = 1; i < recall.size(); ++i) {
    if (recall[i] != recall[i - 1]) {
      ap += (recall[i] - recall[i - 1]) * precision[i];
    }
  }
  return ap;
}

APResult evaluate_ap(std::span<const Detection> dets,
                     std::span<const GroundTruthObject> gts,
                     const MatchParams& params) {
  return evaluate_ap(dets, gts, match_detections(dets, gts, params));
}

APResult evaluate_ap(std::span<const Detection> dets,
                     std::span<const GroundTruthObject> gts,
                     const MatchResult& match) {
  APResult result;
  const auto counts = ground_truth_counts(gts);
  for (const auto& [cls, n] : counts) {
    PrecisionRecallCurve curve = class_curve(dets, match, cls, n);
    result.ap[cls] = average_precision(curve);
    result.curves.emplace(cls, std::move(curve));
  }
  std::set<std::string> excluded;
  for (std::size_t d : match.ranking) {
    if (!counts.contains(dets[d].class_id)) excluded.insert(dets[d].class_id);
  }
  result.excluded_classes.assign(excluded.begin(), excluded.end());
  return result;
}

double mean_average_precision(const std::map<std::string, double>& ap_by_class,
                              std::span<const std::string> class_set) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const std::string& cls : class_set) {
    auto it = ap_by_class.find(cls);
    if (it == ap_by_class.end()) continue;
    sum += it->second;
    ++n;
  }
  if (n == 0) {
    throw EmptyClassSetError("mAP over an empty class set");
  }
  return sum / static_cast<double>(n);
}

std::vector<std::string> vehicle_class_set() {
  return {kVehicleClasses.begin(), kVehicleClasses.end()};
}

std::vector<std::string> vehicle_and_person_class_set() {
  auto set = vehicle_class_set();
  set.emplace_back(kPersonClass);
  return set;
}

}  // namespace approxdet
