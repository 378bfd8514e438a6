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

// Turns per-frame detection lists into fused lists by averaging each
// object's confidence over the last three frames.
//
// A frame in which a track has no detection contributes 0 to the average.
// The divisor is min(3, frames seen so far), so the first frame of a
// sequence passes through unchanged. A track is emitted when its average
// reaches the confidence threshold, using the current box, or the most
// recent one when the current frame has no member.

#ifndef APPROXDET_FUSION_H_
#define APPROXDET_FUSION_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "approxdet/detection.h"

namespace approxdet {

struct Frame {
  std::int64_t frame_id = 0;
  // Raw detections; confidences below the output threshold must be kept.
  std::vector<Detection> detections;

  friend bool operator==(const Frame&, const Frame&) = default;
};

using FrameSequence = std::vector<Frame>;

// Throws std::invalid_argument unless frame ids strictly increase.
void validate_sequence(const FrameSequence& frames);

struct Pairing {
  struct Pair {
    std::size_t prev = 0;
    std::size_t cur = 0;
    double iou = 0.0;
  };
  std::vector<Pair> pairs;  // in selection order
  std::vector<std::size_t> unpaired_prev;
  std::vector<std::size_t> unpaired_cur;
};

// Greedy one-to-one pairing by descending IoU among same-class pairs with
// IoU >= iou_floor.
Pairing associate(std::span<const Detection> prev,
                  std::span<const Detection> cur, double iou_floor = 0.3);

struct FusionParams {
  double conf_threshold = 0.5;
  double iou_floor = 0.3;
  std::size_t window = 3;
};

struct Track {
  std::uint64_t id = 0;
  std::string class_id;
  BoundingBox last_box;
  bool present = false;  // has a member in the latest frame
  // Member confidences, oldest first; 0 for frames without a member.
  std::deque<double> confidences;
};

class TemporalFuser {
 public:
  explicit TemporalFuser(FusionParams params = {});

  // Consumes frame i and returns the fused list for frame i.
  std::vector<Detection> push(const Frame& frame);

  const std::vector<Track>& tracks() const { return tracks_; }
  std::size_t frames_seen() const { return frames_seen_; }

 private:
  FusionParams params_;
  std::vector<Track> tracks_;
  std::size_t frames_seen_ = 0;
  std::uint64_t next_id_ = 0;
  std::int64_t last_frame_id_ = 0;
};

FrameSequence fuse_sequence(const FrameSequence& frames,
                            const FusionParams& params = {});

}  // namespace approxdet

#endif  // APPROXDET_FUSION_H_
