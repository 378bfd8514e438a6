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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "approxdet/detection.h"
#include "test_fixtures.h"

namespace approxdet {
namespace {

Detection det(std::string cls, double conf, BoundingBox b, std::int64_t frame = 0) {
  return {std::move(cls), conf, b, frame};
}

GroundTruthObject gt(std::string cls, BoundingBox b, std::int64_t frame = 0) {
  return {std::move(cls), b, frame, std::nullopt};
}

TEST(IouTest, Examples) {
  const BoundingBox a{0.1, 0.1, 0.4, 0.5};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, {0.5, 0.5, 0.9, 0.9}), 0.0);
  EXPECT_NEAR(iou({0, 0, 1, 1}, {0.5, 0, 1.5, 1}), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(iou({0.2, 0.2, 0.2, 0.2}, {0.2, 0.2, 0.2, 0.2}), 0.0);
  EXPECT_EQ(iou({0.2, 0.2, 0.2, 0.6}, {0.1, 0.1, 0.5, 0.5}), 0.0);
}

TEST(IouTest, HalfOverlapAgreesWithMonteCarloArea) {
  const BoundingBox a{0, 0, 1, 1}, b{0.5, 0, 1.5, 1};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(0.0, 1.5), uy(0.0, 1.0);
  int in_a = 0, in_b = 0, both = 0;
  for (int i = 0; i < 400000; ++i) {
    const double x = ux(rng), y = uy(rng);
    const bool ia = x <= 1.0, ib = x >= 0.5;
    in_a += ia;
    in_b += ib;
    both += ia && ib;
  }
  const double estimate = static_cast<double>(both) / (in_a + in_b - both);
  EXPECT_NEAR(estimate, iou(a, b), 0.005);
}

TEST(IouTest, SymmetricAndBounded) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    const auto a = fixture::random_box(rng), b = fixture::random_box(rng);
    const double v = iou(a, b);
    ASSERT_EQ(v, iou(b, a));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_DOUBLE_EQ(iou(a, a), 1.0);
  }
}

TEST(MatchTest, SingleExactHit) {
  const BoundingBox b{0.1, 0.1, 0.3, 0.3};
  std::vector<Detection> d = {det("car", 0.9, b)};
  std::vector<GroundTruthObject> g = {gt("car", b)};
  const auto m = match_detections(d, g);
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.fp, 0u);
  EXPECT_EQ(m.fn, 0u);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_DOUBLE_EQ(m.pairs[0].iou, 1.0);
}

TEST(MatchTest, BelowIouThresholdIsFpAndFn) {
  // [0,0,0.4,0.5] vs [0.2,0,0.6,0.5]: overlap 0.1, union 0.3 -> 1/3.
  std::vector<Detection> d = {det("car", 0.9, {0, 0, 0.4, 0.5})};
  std::vector<GroundTruthObject> g = {gt("car", {0.2, 0, 0.6, 0.5})};
  const auto m = match_detections(d, g);
  EXPECT_EQ(m.tp, 0u);
  EXPECT_EQ(m.fp, 1u);
  EXPECT_EQ(m.fn, 1u);
}

TEST(MatchTest, HigherConfidenceWins) {
  const BoundingBox g_box{0.1, 0.1, 0.5, 0.5};
  std::vector<Detection> d = {det("car", 0.6, {0.1, 0.1, 0.5, 0.5}),
                              det("car", 0.9, {0.12, 0.1, 0.5, 0.5})};
  std::vector<GroundTruthObject> g = {gt("car", g_box)};
  const auto m = match_detections(d, g);
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.fp, 1u);
  EXPECT_EQ(m.fn, 0u);
  EXPECT_TRUE(m.detection_matched[1]);
  EXPECT_FALSE(m.detection_matched[0]);
}

TEST(MatchTest, ConfidenceThresholdAndClassAndFrameSeparation) {
  const BoundingBox b{0.1, 0.1, 0.3, 0.3};
  std::vector<Detection> d = {det("car", 0.4, b), det("truck", 0.9, b),
                              det("car", 0.9, b, 1)};
  std::vector<GroundTruthObject> g = {gt("car", b)};
  const auto m = match_detections(d, g);
  EXPECT_FALSE(m.retained[0]);
  EXPECT_EQ(m.tp, 0u);
  EXPECT_EQ(m.fp, 2u);
  EXPECT_EQ(m.fn, 1u);
}

TEST(MatchTest, ZeroAreaNeverMatches) {
  const BoundingBox z{0.2, 0.2, 0.2, 0.2};
  std::vector<Detection> d = {det("car", 0.9, z)};
  std::vector<GroundTruthObject> g = {gt("car", z)};
  const auto m = match_detections(d, g);
  EXPECT_EQ(m.tp, 0u);
}

TEST(MatchTest, AccountingIdentitiesOnRandomFixtures) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto s = fixture::random_scene(rng, 0.3);
    const auto m = match_detections(s.detections, s.ground_truth);
    std::size_t retained = 0;
    for (bool r : m.retained) retained += r;
    ASSERT_EQ(m.tp + m.fn, s.ground_truth.size());
    ASSERT_EQ(m.tp + m.fp, retained);
    ClassCounts total;
    for (const auto& [cls, c] : m.per_class) total += c;
    ASSERT_EQ(total, (ClassCounts{m.tp, m.fp, m.fn}));
  }
}

TEST(PrecisionRecallTest, HandCountedCurve) {
  const auto c = curve_from_ranking({true, false, true}, 2);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_DOUBLE_EQ(c.points[0].precision, 1.0);
  EXPECT_DOUBLE_EQ(c.points[1].precision, 0.5);
  EXPECT_DOUBLE_EQ(c.points[2].precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.points[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(c.points[1].recall, 0.5);
  EXPECT_DOUBLE_EQ(c.points[2].recall, 1.0);
  EXPECT_DOUBLE_EQ(average_precision(c), 5.0 / 6.0);
  EXPECT_THROW(curve_from_ranking({true}, 0), std::invalid_argument);
}

TEST(PrecisionRecallTest, DegenerateCurves) {
  EXPECT_DOUBLE_EQ(average_precision(curve_from_ranking({true, true, true}, 3)), 1.0);
  EXPECT_DOUBLE_EQ(average_precision(curve_from_ranking({}, 4)), 0.0);
  std::vector<Detection> none;
  std::vector<GroundTruthObject> g = {gt("car", {0.1, 0.1, 0.2, 0.2})};
  EXPECT_FALSE(precision_recall_curve(none, {}, "car").has_value());
  const auto c = precision_recall_curve(none, g, "car");
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(c->points.empty());
}

TEST(PrecisionRecallTest, ThreeRankFixtureThroughMatcher) {
  std::vector<GroundTruthObject> g = {gt("car", {0.0, 0.0, 0.2, 0.2}),
                                      gt("car", {0.5, 0.5, 0.7, 0.7})};
  std::vector<Detection> d = {det("car", 0.9, {0.0, 0.0, 0.2, 0.2}),
                              det("car", 0.8, {0.3, 0.0, 0.4, 0.1}),
                              det("car", 0.7, {0.5, 0.5, 0.7, 0.7})};
  const auto ap = evaluate_ap(d, g);
  EXPECT_DOUBLE_EQ(ap.ap.at("car"), 5.0 / 6.0);
}

TEST(ApTest, MonotoneConfidenceTransformLeavesApUnchanged) {
  std::mt19937_64 rng(4);
  MatchParams any_conf{0.5, 0.0};
  for (int i = 0; i < 200; ++i) {
    auto s = fixture::random_scene(rng);
    const auto before = evaluate_ap(s.detections, s.ground_truth, any_conf);
    for (auto& d : s.detections) d.confidence = std::sqrt(d.confidence) * 0.5;
    const auto after = evaluate_ap(s.detections, s.ground_truth, any_conf);
    ASSERT_EQ(before.ap.size(), after.ap.size());
    for (const auto& [cls, v] : before.ap) ASSERT_DOUBLE_EQ(v, after.ap.at(cls)) << cls;
  }
}

TEST(MapTest, MeansAndErrors) {
  const std::map<std::string, double> ap = {{"car", 0.5}, {"truck", 1.0}};
  const std::vector<std::string> one = {"car"};
  const std::vector<std::string> two = {"car", "truck", "bus"};
  const std::vector<std::string> none = {"bus"};
  EXPECT_DOUBLE_EQ(mean_average_precision(ap, one), 0.5);
  EXPECT_DOUBLE_EQ(mean_average_precision(ap, two), 0.75);
  EXPECT_THROW(mean_average_precision(ap, none), EmptyClassSetError);
  EXPECT_THROW(mean_average_precision(ap, {}), EmptyClassSetError);
  EXPECT_EQ(vehicle_class_set().size(), 4u);
  EXPECT_EQ(vehicle_and_person_class_set().size(), 5u);
}

TEST(MapTest, SelfEvaluationIsPerfect) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto s = fixture::random_scene(rng);
    std::vector<Detection> dets;
    std::vector<GroundTruthObject> gts;
    for (const auto& d : s.detections) {
      if (d.confidence < 0.5) continue;
      dets.push_back(d);
      gts.push_back(as_ground_truth(d));
    }
    const auto m = match_detections(dets, gts);
    ASSERT_EQ(m.fp, 0u);
    ASSERT_EQ(m.fn, 0u);
    const auto ap = evaluate_ap(dets, gts, m);
    for (const auto& [cls, v] : ap.ap) ASSERT_DOUBLE_EQ(v, 1.0);
    if (!ap.ap.empty()) {
      std::vector<std::string> all;
      for (const auto& [cls, v] : ap.ap) all.push_back(cls);
      ASSERT_DOUBLE_EQ(mean_average_precision(ap.ap, all), 1.0);
    }
  }
}

TEST(MapTest, DuplicatingAClassLeavesMapUnchanged) {
  std::vector<GroundTruthObject> g = {gt("car", {0.0, 0.0, 0.2, 0.2}),
                                      gt("bus", {0.5, 0.5, 0.7, 0.7})};
  std::vector<Detection> d = {det("car", 0.9, {0.0, 0.0, 0.2, 0.2}),
                              det("bus", 0.8, {0.5, 0.5, 0.7, 0.7}),
                              det("bus", 0.95, {0.8, 0.8, 0.9, 0.9})};
  const auto base = evaluate_ap(d, g);
  // Same bus pattern again in another frame: bus AP unchanged.
  auto d2 = d;
  auto g2 = g;
  for (const auto& x : d) if (x.class_id == "bus") d2.push_back(det("bus", x.confidence, x.box, 1));
  for (const auto& x : g) if (x.class_id == "bus") g2.push_back(gt("bus", x.box, 1));
  const auto dup = evaluate_ap(d2, g2);
  const std::vector<std::string> set = {"car", "bus"};
  EXPECT_DOUBLE_EQ(mean_average_precision(base.ap, set), mean_average_precision(dup.ap, set));
}

TEST(ApTest, ClassesWithoutGroundTruthAreExcluded) {
  std::vector<Detection> d = {det("dog", 0.9, {0.1, 0.1, 0.2, 0.2}),
                              det("car", 0.9, {0.3, 0.3, 0.4, 0.4})};
  std::vector<GroundTruthObject> g = {gt("car", {0.3, 0.3, 0.4, 0.4})};
  const auto ap = evaluate_ap(d, g);
  EXPECT_EQ(ap.ap.count("dog"), 0u);
  ASSERT_EQ(ap.excluded_classes.size(), 1u);
  EXPECT_EQ(ap.excluded_classes[0], "dog");
  EXPECT_DOUBLE_EQ(ap.ap.at("car"), 1.0);
}

}  // namespace
}  // namespace approxdet
