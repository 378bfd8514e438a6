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

#ifndef APPROXDET_DETECTION_H_
#define APPROXDET_DETECTION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace approxdet {

// Normalized image coordinates in [0, 1].
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  // Also the fraction of the image covered by the box.
  double area() const { return width() * height(); }
  bool valid() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  std::string class_id;
  double confidence = 0.0;
  BoundingBox box;
  std::int64_t frame_id = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruthObject {
  std::string class_id;
  BoundingBox box;
  std::int64_t frame_id = 0;
  // Set when the reference is another detector's output; used to place
  // missed objects on the confidence axis.
  std::optional<double> confidence;

  friend bool operator==(const GroundTruthObject&,
                         const GroundTruthObject&) = default;
};

inline constexpr std::array<std::string_view, 4> kVehicleClasses = {
    "car", "truck", "motorbike", "bus"};
inline constexpr std::string_view kPersonClass = "person";
inline constexpr std::string_view kVehicleClass = "Vehicle";

bool is_vehicle_class(std::string_view class_id);

// Intersection over union. 0 for disjoint boxes and whenever the union has
// zero area, including two identical zero-area boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

// Treat a detection list as ground truth, keeping confidences.
GroundTruthObject as_ground_truth(const Detection& d);

}  // namespace approxdet

#endif  // APPROXDET_DETECTION_H_
