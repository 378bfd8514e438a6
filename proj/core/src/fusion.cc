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

#include "approxdet/fusion.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace approxdet {

void validate_sequence(const FrameSequence& frames) {
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].frame_id <= frames[i - 1].frame_id) {
      throw std::invalid_argument(
          "frame ids must strictly increase: " +
          std::to_string(frames[i - 1].frame_id) + " then " +
          std::to_string(frames[i].frame_id));
    }
  }
}

Pairing associate(std::span<const Detection> prev,
                  std::span<const Detection> cur, double iou_floor) {
  std::vector<Pairing::Pair> candidates;
  for (std::size_t p = 0; p < prev.size(); ++p) {
    for (std::size_t c = 0; c < cur.size(); ++c) {
      if (prev[p].class_id != cur[c].class_id) continue;
      const double v = iou(prev[p].box, cur[c].box);
      if (v >= iou_floor && v > 0.0) candidates.push_back({p, c, v});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Pairing::Pair& a, const Pairing::Pair& b) {
                     return a.iou > b.iou;
                   });

  Pairing out;
  std::vector<bool> used_prev(prev.size(), false), used_cur(cur.size(), false);
  for (const Pairing::Pair& c : candidates) {
    if (used_prev[c.prev] || used_cur[c.cur]) continue;
    used_prev[c.prev] = used_cur[c.cur] = true;
    out.pairs.push_back(c);
  }
  for (std::size_t p = 0; p < prev.size(); ++p) {
    if (!used_prev[p]) out.unpaired_prev.push_back(p);
  }
  for (std::size_t c = 0; c < cur.size(); ++c) {
    if (!used_cur[c]) out.unpaired_cur.push_back(c);
  }
  return out;
}

TemporalFuser::TemporalFuser(FusionParams params) : params_(params) {
  if (params_.window == 0) throw std::invalid_argument("fusion window must be >= 1");
}

std::vector<Detection> TemporalFuser::push(const Frame& frame) {
  if (frames_seen_ > 0 && frame.frame_id <= last_frame_id_) {
    throw std::invalid_argument("frame ids must strictly increase");
  }
  last_frame_id_ = frame.frame_id;
  ++frames_seen_;

  std::vector<Detection> reps;
  reps.reserve(tracks_.size());
  for (const Track& t : tracks_) reps.push_back({t.class_id, 0.0, t.last_box, 0});
  const Pairing pairing = associate(reps, frame.detections, params_.iou_floor);

  for (Track& t : tracks_) {
    t.present = false;
    t.confidences.push_back(0.0);
  }
  for (const Pairing::Pair& p : pairing.pairs) {
    Track& t = tracks_[p.prev];
    const Detection& d = frame.detections[p.cur];
    t.confidences.back() = d.confidence;
    t.last_box = d.box;
    t.present = true;
  }
  for (std::size_t c : pairing.unpaired_cur) {
    const Detection& d = frame.detections[c];
    Track t;
    t.id = next_id_++;
    t.class_id = d.class_id;
    t.last_box = d.box;
    t.present = true;
    t.confidences.push_back(d.confidence);
    tracks_.push_back(std::move(t));
  }
  for (Track& t : tracks_) {
    while (t.confidences.size() > params_.window) t.confidences.pop_front();
  }
  std::erase_if(tracks_, [](const Track& t) {
    return std::all_of(t.confidences.begin(), t.confidences.end(),
                       [](double c) { return c == 0.0; });
  });

  const double divisor =
      static_cast<double>(std::min(frames_seen_, params_.window));
  std::vector<Detection> fused;
  for (const Track& t : tracks_) {
    const double average =
        std::accumulate(t.confidences.begin(), t.confidences.end(), 0.0) / divisor;
    if (average >= params_.conf_threshold) {
      fused.push_back({t.class_id, average, t.last_box, frame.frame_id});
    }
  }
  return fused;
}

FrameSequence fuse_sequence(const FrameSequence& frames,
                            const FusionParams& params) {
  validate_sequence(frames);
  TemporalFuser fuser(params);
  FrameSequence out;
  out.reserve(frames.size());
  for (const Frame& f : frames) out.push_back({f.frame_id, fuser.push(f)});
  return out;
}

}  // namespace approxdet
