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

#include "approxdet/detection.h"

#include <algorithm>

namespace approxdet {

bool BoundingBox::valid() const {
  return x_min <= x_max && y_min <= y_max && x_min >= 0.0 && y_min >= 0.0 &&
         x_max <= 1.0 && y_max <= 1.0;
}

bool is_vehicle_class(std::string_view class_id) {
  return std::find(kVehicleClasses.begin(), kVehicleClasses.end(), class_id) !=
         kVehicleClasses.end();
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

GroundTruthObject as_ground_truth(const Detection& d) {
  return {d.class_id, d.box, d.frame_id, d.confidence};
}

}  // namespace approxdet
