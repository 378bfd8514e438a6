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

#ifndef APPROXDET_TENSOR_H_
#define APPROXDET_TENSOR_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "approxdet/softfloat.h"

namespace approxdet {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string shape_to_string(const Shape& shape);

// Dense row-major tensor of binary32 payloads.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<Binary32> data);

  static Tensor from_floats(Shape shape, std::span<const float> values);
  static Tensor filled(Shape shape, float value);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const { return data_.size(); }

  std::span<const Binary32> data() const { return data_; }
  std::span<Binary32> data() { return data_; }

  Binary32 operator[](std::size_t i) const { return data_[i]; }
  Binary32& operator[](std::size_t i) { return data_[i]; }

  float value(std::size_t i) const { return data_[i].to_float(); }
  std::vector<float> to_floats() const;

  // Same data, new shape with equal element count.
  Tensor reshaped(Shape shape) const;

  bool has_nan() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<Binary32> data_;
};

// Raw little-endian float32 payload preceded by one line of JSON, e.g.
// {"dtype":"f32","shape":[2,3]}\n<24 bytes>.
void save_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor load_tensor(const std::filesystem::path& path);

}  // namespace approxdet

#endif  // APPROXDET_TENSOR_H_
