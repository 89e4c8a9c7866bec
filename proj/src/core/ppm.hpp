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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/tensor.hpp"

namespace fax {

/// Binary P6 bytes (maxval 255, value round(v*255)) for a 3-channel image.
/// Single-channel images are replicated to gray.
std::vector<std::uint8_t> encode_ppm(const ImageTensor &image);

/// Tiles `images` row-major into a grid `cols` wide with `pad` black pixels
/// between tiles. All images must share one shape.
ImageTensor tile_images(std::span<const ImageTensor> images, std::size_t cols, std::size_t pad = 1);

void write_ppm(const std::string &path, const ImageTensor &image);

}  // namespace fax
