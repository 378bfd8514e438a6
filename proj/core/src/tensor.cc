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

#include "approxdet/tensor.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <functional>
#include <numeric>

#include <nlohmann/json.hpp>

namespace approxdet {

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape)
    : shape_(std::move(shape)), data_(element_count(shape_)) {}

Tensor::Tensor(Shape shape, std::vector<Binary32> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != element_count(shape_)) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_to_string(shape_));
  }
}

Tensor Tensor::from_floats(Shape shape, std::span<const float> values) {
  std::vector<Binary32> data(values.size());
  std::transform(values.begin(), values.end(), data.begin(),
                 [](float f) { return Binary32::from_float(f); });
  return Tensor(std::move(shape), std::move(data));
}

Tensor Tensor::filled(Shape shape, float value) {
  Tensor t(std::move(shape));
  std::fill(t.data_.begin(), t.data_.end(), Binary32::from_float(value));
  return t;
}

std::vector<float> Tensor::to_floats() const {
  std::vector<float> out(data_.size());
  std::transform(data_.begin(), data_.end(), out.begin(),
                 [](Binary32 b) { return b.to_float(); });
  return out;
}

Tensor Tensor::reshaped(Shape shape) const {
  return Tensor(std::move(shape), data_);
}

bool Tensor::has_nan() const {
  return std::any_of(data_.begin(), data_.end(),
                     [](Binary32 b) { return is_nan(b); });
}

void save_tensor(const Tensor& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  nlohmann::json header = {{"dtype", "f32"}, {"shape", t.shape()}};
  out << header.dump() << '\n';
  for (Binary32 v : t.data()) {
    const std::uint32_t bits = v.bits;
    const char bytes[4] = {static_cast<char>(bits & 0xFF),
                           static_cast<char>((bits >> 8) & 0xFF),
                           static_cast<char>((bits >> 16) & 0xFF),
                           static_cast<char>((bits >> 24) & 0xFF)};
    out.write(bytes, 4);
  }
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string header_line;
  std::getline(in, header_line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": bad tensor header: " + e.what());
  }
  if (header.value("dtype", "") != "f32" || !header.contains("shape")) {
    throw std::runtime_error(path.string() + ": expected dtype f32 and shape");
  }
  const Shape shape = header.at("shape").get<Shape>();
  std::vector<Binary32> data(element_count(shape));
  for (Binary32& v : data) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
      throw std::runtime_error(path.string() + ": truncated tensor payload");
    }
    v.bits = static_cast<std::uint32_t>(bytes[0]) |
             (static_cast<std::uint32_t>(bytes[1]) << 8) |
             (static_cast<std::uint32_t>(bytes[2]) << 16) |
             (static_cast<std::uint32_t>(bytes[3]) << 24);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error(path.string() + ": trailing bytes after payload");
  }
  return Tensor(shape, std::move(data));
}

}  // namespace approxdet
