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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace approxdet {
namespace {

std::vector<DatasetRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in);
}

TEST(DatasetTest, ParsesRecords) {
  const auto r = parse(
      R"({"frame": 3, "image_id": "a.jpg", "width": 640, "height": 480, "objects": [)"
      R"({"class": "car", "box": [0.1, 0.2, 0.3, 0.4], "confidence": 0.75}]})"
      "\n\n"
      R"({"frame": 1, "channel": "iT", "objects": []})"
      "\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].frame, 3);
  EXPECT_EQ(r[0].image_id, "a.jpg");
  EXPECT_EQ(r[0].width, 640);
  ASSERT_EQ(r[0].objects.size(), 1u);
  EXPECT_EQ(r[0].objects[0].box, (BoundingBox{0.1, 0.2, 0.3, 0.4}));
  EXPECT_EQ(r[0].objects[0].confidence, 0.75);
  EXPECT_EQ(r[1].channel, "iT");

  const auto frames = to_frames(r);
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].frame_id, 1);
  EXPECT_EQ(frames[1].detections[0].frame_id, 3);
}

TEST(DatasetTest, ErrorsNameTheLine) {
  const char* bad[] = {
      "{\"objects\": []}",
      "{\"frame\": 0, \"objects\": [{\"class\": \"car\", \"box\": [0.5, 0, 0.2, 1]}]}",
      "{\"frame\": 0, \"objects\": [{\"class\": \"car\", \"box\": [0, 0, 1.5, 1]}]}",
      "{\"frame\": 0, \"objects\": [{\"class\": \"car\", \"box\": [0, 0, 1, 1], \"confidence\": 2}]}",
      "{\"frame\": 0, \"objects\": [{\"box\": [0, 0, 1, 1]}]}",
      "{\"frame\": 0, \"objects\": [], \"extra\": 1}",
      "{\"frame\": 0, \"objects\": [",
  };
  for (const char* line : bad) {
    try {
      parse(std::string("{\"frame\": 9, \"objects\": []}\n") + line + "\n");
      ADD_FAILURE() << line;
    } catch (const DataError& e) {
      EXPECT_EQ(std::string(e.what()).rfind("line 2:", 0), 0u) << e.what();
    }
  }
  EXPECT_THROW(parse("{\"frame\": 1, \"objects\": []}\n{\"frame\": 1, \"objects\": []}\n"),
               DataError);
  EXPECT_THROW(load_dataset("/nonexistent/file.jsonl"), DataError);
}

TEST(DatasetTest, DetectionsNeedConfidence) {
  const auto r = parse(R"({"frame": 0, "objects": [{"class": "car", "box": [0, 0, 1, 1]}]})");
  EXPECT_THROW(to_detections(r), DataError);
  const auto g = to_ground_truth(r);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_FALSE(g[0].confidence.has_value());
}

TEST(DatasetTest, RoundTripIsLossless) {
  std::vector<Detection> dets = {{"car", 0.1 + 0.2, {0.1, 0.2, 0.30000000000000004, 0.4}, 2},
                                 {"person", 1.0 / 3.0, {0, 0, 1, 1}, 5}};
  const auto records = from_detections(dets, {0, 2, 5}, "T");
  ASSERT_EQ(records.size(), 3u);
  EXPECT_TRUE(records[0].objects.empty());
  std::ostringstream out;
  write_dataset(out, records);
  const auto back = parse(out.str());
  EXPECT_EQ(back, records);
  EXPECT_EQ(to_detections(back), dets);

  const auto path = std::filesystem::temp_directory_path() / "approxdet_dataset_test.jsonl";
  save_dataset(path, records);
  EXPECT_EQ(load_dataset(path), records);
  std::filesystem::remove(path);
}

TEST(DatasetTest, ConvertsCoco) {
  std::istringstream in(R"({
    "images": [{"id": 7, "file_name": "b.jpg", "width": 200, "height": 100},
               {"id": 2, "width": 50, "height": 50}],
    "categories": [{"id": 3, "name": "car"}],
    "annotations": [{"image_id": 7, "category_id": 3, "bbox": [20, 10, 100, 50]},
                    {"image_id": 2, "category_id": 3, "bbox": [0, 0, 60, 10], "score": 0.4}]
  })");
  const auto r = convert_coco(in);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].image_id, "2");
  EXPECT_EQ(r[0].frame, 0);
  EXPECT_EQ(r[0].objects[0].box, (BoundingBox{0.0, 0.0, 1.0, 0.2}));
  EXPECT_EQ(r[0].objects[0].confidence, 0.4);
  EXPECT_EQ(r[1].image_id, "b.jpg");
  EXPECT_EQ(r[1].objects[0].box, (BoundingBox{0.1, 0.1, 0.6, 0.6}));

  std::istringstream missing(R"({"images": []})");
  EXPECT_THROW(convert_coco(missing), DataError);
  std::istringstream garbage("not json");
  EXPECT_THROW(convert_coco(garbage), DataError);
}

}  // namespace
}  // namespace approxdet
