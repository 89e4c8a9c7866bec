/**
 * Copyright 2026 The fax Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace fax {

struct Shape3 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return channels * height * width; }
  bool operator==(const Shape3 &) const = default;
  std::string str() const;
};

/// C x H x W image, row-major within a channel. Dataset images live in
/// [0,1]; nothing here enforces that.
class ImageTensor {
 public:
  ImageTensor() = default;
  explicit ImageTensor(Shape3 shape, double fill = 0.0) : shape_(shape), data_(shape.size(), fill) {}
  ImageTensor(Shape3 shape, std::vector<double> data);

  const Shape3 &shape() const { return shape_; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }

  double &at(std::size_t c, std::size_t y, std::size_t x) { return data_[(c * shape_.height + y) * shape_.width + x]; }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * shape_.height + y) * shape_.width + x];
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const ImageTensor &) const = default;

 private:
  Shape3 shape_;
  std::vector<double> data_;
};

inline constexpr Shape3 kMnistShape{3, 28, 28};
inline constexpr std::size_t kNumClasses = 10;

}  // namespace fax
