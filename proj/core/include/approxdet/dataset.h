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

// Line-delimited JSON detection / annotation files. One record per image
// or video frame:
//
//   {"frame": 3, "image_id": "000123", "width": 640, "height": 480,
//    "channel": "iT",
//    "objects": [{"class": "car", "box": [0.1, 0.2, 0.3, 0.4],
//                 "confidence": 0.87}]}
//
// `frame` is required and unique within a file; boxes are
// [x_min, y_min, x_max, y_max] in normalized image coordinates.
// `confidence` is required for detections and optional for ground truth.
// `channel` marks per-frame ("iT") versus fused ("T") detection streams.

#ifndef APPROXDET_DATASET_H_
#define APPROXDET_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "approxdet/detection.h"
#include "approxdet/fusion.h"

namespace approxdet {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObjectRecord {
  std::string class_id;
  BoundingBox box;
  std::optional<double> confidence;

  friend bool operator==(const ObjectRecord&, const ObjectRecord&) = default;
};

struct DatasetRecord {
  std::int64_t frame = 0;
  std::string image_id;
  int width = 0;
  int height = 0;
  std::string channel;
  std::vector<ObjectRecord> objects;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

// Throws DataError naming the offending line.
std::vector<DatasetRecord> parse_dataset(std::istream& in);
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records);
void save_dataset(const std::filesystem::path& path,
                  const std::vector<DatasetRecord>& records);

// Throws DataError when an object has no confidence.
std::vector<Detection> to_detections(const std::vector<DatasetRecord>& records);
std::vector<GroundTruthObject> to_ground_truth(
    const std::vector<DatasetRecord>& records);
// Ordered by frame.
FrameSequence to_frames(const std::vector<DatasetRecord>& records);

std::vector<DatasetRecord> from_detections(const std::vector<Detection>& dets,
                                           const std::vector<std::int64_t>& frames,
                                           const std::string& channel = {});
std::vector<DatasetRecord> from_ground_truth(
    const std::vector<GroundTruthObject>& gts,
    const std::vector<std::int64_t>& frames);

// COCO-style annotation JSON (images / annotations / categories, pixel
// [x, y, w, h] boxes) to records. Frames follow ascending image id.
// Annotations carrying a "score" keep it as confidence.
std::vector<DatasetRecord> convert_coco(std::istream& in);

}  // namespace approxdet

#endif  // APPROXDET_DATASET_H_
