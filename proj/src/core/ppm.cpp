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
#include "core/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace fax {

std::vector<std::uint8_t> encode_ppm(const ImageTensor &image) {
  if (image.channels() != 3 && image.channels() != 1) {
    throw ShapeError("PPM needs 1 or 3 channels, got " + image.shape().str());
  }
  const std::string header =
      "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + 3 * image.height() * image.width());
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        const double v = image.at(image.channels() == 3 ? c : 0, y, x);
        out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
      }
    }
  }
  return out;
}

ImageTensor tile_images(std::span<const ImageTensor> images, std::size_t cols, std::size_t pad) {
  if (images.empty()) throw ConfigError("no images to tile");
  if (cols == 0) throw ConfigError("grid needs at least one column");
  const Shape3 tile = images.front().shape();
  cols = std::min(cols, images.size());
  const std::size_t rows = (images.size() + cols - 1) / cols;
  ImageTensor grid(Shape3{tile.channels, rows * tile.height + (rows - 1) * pad, cols * tile.width + (cols - 1) * pad});
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].shape() != tile) throw ShapeError("image " + std::to_string(i) + " is not " + tile.str());
    const std::size_t oy = (i / cols) * (tile.height + pad);
    const std::size_t ox = (i % cols) * (tile.width + pad);
    for (std::size_t c = 0; c < tile.channels; ++c) {
      for (std::size_t y = 0; y < tile.height; ++y) {
        for (std::size_t x = 0; x < tile.width; ++x) grid.at(c, oy + y, ox + x) = images[i].at(c, y, x);
      }
    }
  }
  return grid;
}

void write_ppm(const std::string &path, const ImageTensor &image) {
  const auto bytes = encode_ppm(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace fax
