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

#include "approxdet/dataset.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace approxdet {
namespace {

using nlohmann::json;

[[noreturn]] void fail(int line, const std::string& message) {
  throw DataError("line " + std::to_string(line) + ": " + message);
}

ObjectRecord parse_object(const json& j, int line) {
  if (!j.is_object()) fail(line, "object entry must be a JSON object");
  ObjectRecord o;
  if (!j.contains("class") || !j["class"].is_string()) {
    fail(line, "object needs a string \"class\"");
  }
  o.class_id = j["class"].get<std::string>();
  if (!j.contains("box") || !j["box"].is_array() || j["box"].size() != 4) {
    fail(line, "object needs \"box\": [x_min, y_min, x_max, y_max]");
  }
  for (const json& v : j["box"]) {
    if (!v.is_number()) fail(line, "box coordinates must be numbers");
  }
  o.box = {j["box"][0].get<double>(), j["box"][1].get<double>(),
           j["box"][2].get<double>(), j["box"][3].get<double>()};
  if (!o.box.valid()) {
    fail(line, "box outside the normalized image or inverted");
  }
  if (j.contains("confidence")) {
    if (!j["confidence"].is_number()) fail(line, "confidence must be a number");
    const double c = j["confidence"].get<double>();
    if (!(c >= 0.0 && c <= 1.0)) fail(line, "confidence outside [0, 1]");
    o.confidence = c;
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "class" && key != "box" && key != "confidence") {
      fail(line, "unknown object field \"" + key + "\"");
    }
  }
  return o;
}

DatasetRecord parse_record(const json& j, int line) {
  if (!j.is_object()) fail(line, "record must be a JSON object");
  DatasetRecord r;
  if (!j.contains("frame") || !j["frame"].is_number_integer()) {
    fail(line, "record needs an integer \"frame\"");
  }
  r.frame = j["frame"].get<std::int64_t>();
  if (j.contains("image_id")) {
    if (!j["image_id"].is_string()) fail(line, "image_id must be a string");
    r.image_id = j["image_id"].get<std::string>();
  }
  for (const char* dim : {"width", "height"}) {
    if (!j.contains(dim)) continue;
    if (!j[dim].is_number_integer() || j[dim].get<int>() < 0) {
      fail(line, std::string(dim) + " must be a non-negative integer");
    }
  }
  r.width = j.value("width", 0);
  r.height = j.value("height", 0);
  if (j.contains("channel")) {
    if (!j["channel"].is_string()) fail(line, "channel must be a string");
    r.channel = j["channel"].get<std::string>();
  }
  if (!j.contains("objects") || !j["objects"].is_array()) {
    fail(line, "record needs an \"objects\" array");
  }
  for (const json& o : j["objects"]) r.objects.push_back(parse_object(o, line));
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> kKnown = {"frame", "image_id", "width",
                                                 "height", "channel", "objects"};
    if (!kKnown.contains(key)) fail(line, "unknown record field \"" + key + "\"");
  }
  return r;
}

json to_json(const DatasetRecord& r) {
  json j;
  j["frame"] = r.frame;
  if (!r.image_id.empty()) j["image_id"] = r.image_id;
  if (r.width) j["width"] = r.width;
  if (r.height) j["height"] = r.height;
  if (!r.channel.empty()) j["channel"] = r.channel;
  j["objects"] = json::array();
  for (const ObjectRecord& o : r.objects) {
    json jo;
    jo["class"] = o.class_id;
    jo["box"] = {o.box.x_min, o.box.y_min, o.box.x_max, o.box.y_max};
    if (o.confidence) jo["confidence"] = *o.confidence;
    j["objects"].push_back(std::move(jo));
  }
  return j;
}

}  // namespace

std::vector<DatasetRecord> parse_dataset(std::istream& in) {
  std::vector<DatasetRecord> records;
  std::set<std::int64_t> frames;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::parse_error& e) {
      fail(line, std::string("invalid JSON: ") + e.what());
    }
    DatasetRecord r = parse_record(j, line);
    if (!frames.insert(r.frame).second) {
      fail(line, "duplicate frame " + std::to_string(r.frame));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return parse_dataset(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records) {
  for (const DatasetRecord& r : records) out << to_json(r).dump() << '\n';
}

void save_dataset(const std::filesystem::path& path,
                  const std::vector<DatasetRecord>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_dataset(out, records);
}

std::vector<Detection> to_detections(const std::vector<DatasetRecord>& records) {
  std::vector<Detection> out;
  for (const DatasetRecord& r : records) {
    for (const ObjectRecord& o : r.objects) {
      if (!o.confidence) {
        throw DataError("frame " + std::to_string(r.frame) + ": detection of class '" +
                        o.class_id + "' has no confidence");
      }
      out.push_back({o.class_id, *o.confidence, o.box, r.frame});
    }
  }
  return out;
}

std::vector<GroundTruthObject> to_ground_truth(
    const std::vector<DatasetRecord>& records) {
  std::vector<GroundTruthObject> out;
  for (const DatasetRecord& r : records) {
    for (const ObjectRecord& o : r.objects) {
      out.push_back({o.class_id, o.box, r.frame, o.confidence});
    }
  }
  return out;
}

FrameSequence to_frames(const std::vector<DatasetRecord>& records) {
  std::vector<const DatasetRecord*> ordered;
  for (const DatasetRecord& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->frame < b->frame; });
  FrameSequence frames;
  for (const DatasetRecord* r : ordered) {
    Frame f;
    f.frame_id = r->frame;
    f.detections = to_detections({*r});
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<DatasetRecord> from_detections(const std::vector<Detection>& dets,
                                           const std::vector<std::int64_t>& frames,
                                           const std::string& channel) {
  std::map<std::int64_t, DatasetRecord> by_frame;
  for (std::int64_t f : frames) by_frame[f].frame = f;
  for (const Detection& d : dets) {
    DatasetRecord& r = by_frame[d.frame_id];
    r.frame = d.frame_id;
    r.objects.push_back({d.class_id, d.box, d.confidence});
  }
  std::vector<DatasetRecord> out;
  for (auto& [f, r] : by_frame) {
    r.channel = channel;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DatasetRecord> from_ground_truth(
    const std::vector<GroundTruthObject>& gts,
    const std::vector<std::int64_t>& frames) {
  std::map<std::int64_t, DatasetRecord> by_frame;
  for (std::int64_t f : frames) by_frame[f].frame = f;
  for (const GroundTruthObject& g : gts) {
    DatasetRecord& r = by_frame[g.frame_id];
    r.frame = g.frame_id;
    r.objects.push_back({g.class_id, g.box, g.confidence});
  }
  std::vector<DatasetRecord> out;
  for (auto& [f, r] : by_frame) out.push_back(std::move(r));
  return out;
}

namespace {

std::vector<DatasetRecord> convert_coco_json(const json& j);

}  // namespace

std::vector<DatasetRecord> convert_coco(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("COCO file is not valid JSON: ") + e.what());
  }
  try {
    return convert_coco_json(j);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed COCO file: ") + e.what());
  }
}

namespace {

std::vector<DatasetRecord> convert_coco_json(const json& j) {
  if (!j.contains("images") || !j.contains("annotations") ||
      !j.contains("categories")) {
    throw DataError("COCO file needs images, annotations and categories");
  }
  std::map<std::int64_t, std::string> categories;
  for (const json& c : j["categories"]) {
    categories[c.at("id").get<std::int64_t>()] = c.at("name").get<std::string>();
  }
  std::map<std::int64_t, DatasetRecord> images;
  for (const json& im : j["images"]) {
    DatasetRecord r;
    const auto id = im.at("id").get<std::int64_t>();
    r.image_id = im.contains("file_name") ? im["file_name"].get<std::string>()
                                          : std::to_string(id);
    r.width = im.at("width").get<int>();
    r.height = im.at("height").get<int>();
    if (r.width <= 0 || r.height <= 0) {
      throw DataError("COCO image " + std::to_string(id) + " has no size");
    }
    images.emplace(id, std::move(r));
  }
  for (const json& a : j["annotations"]) {
    const auto image = a.at("image_id").get<std::int64_t>();
    auto it = images.find(image);
    if (it == images.end()) {
      throw DataError("annotation refers to unknown image " + std::to_string(image));
    }
    const auto cat = a.at("category_id").get<std::int64_t>();
    if (!categories.contains(cat)) {
      throw DataError("annotation refers to unknown category " + std::to_string(cat));
    }
    const json& b = a.at("bbox");
    const double w = it->second.width, h = it->second.height;
    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    ObjectRecord o;
    o.class_id = categories[cat];
    o.box = {clamp01(b.at(0).get<double>() / w), clamp01(b.at(1).get<double>() / h),
             clamp01((b.at(0).get<double>() + b.at(2).get<double>()) / w),
             clamp01((b.at(1).get<double>() + b.at(3).get<double>()) / h)};
    if (a.contains("score")) o.confidence = a["score"].get<double>();
    it->second.objects.push_back(std::move(o));
  }
  std::vector<DatasetRecord> out;
  std::int64_t frame = 0;
  for (auto& [id, r] : images) {
    r.frame = frame++;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

}  // namespace approxdet
