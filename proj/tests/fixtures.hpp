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
#ifndef FAX_TESTS_FIXTURES_HPP_
#define FAX_TESTS_FIXTURES_HPP_

#include <random>

#include "core/pipeline.hpp"

namespace fax::testing {

inline ImageTensor random_image(Shape3 shape, std::mt19937_64 &gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ImageTensor img(shape);
  for (double &v : img.values()) v = u(gen);
  return img;
}

/// Pairs with independent uniform pixels and round-robin labels.
inline PairedDataset random_pairs(std::size_t n, Shape3 shape, std::uint64_t seed, std::size_t classes = 10) {
  std::mt19937_64 gen(seed);
  PairedDataset data;
  for (std::size_t i = 0; i < n; ++i) {
    PairedItem item{random_image(shape, gen), random_image(shape, gen), static_cast<std::uint8_t>(i % classes)};
    data.push_back(std::move(item));
  }
  return data;
}

/// Single-pixel pairs with x0 = 0 and x1 = 1, so an emitted pixel equals its weight.
inline PairedDataset unit_pairs(std::size_t n) {
  PairedDataset data;
  for (std::size_t i = 0; i < n; ++i) {
    data.push_back(PairedItem{ImageTensor({1, 1, 1}, 0.0), ImageTensor({1, 1, 1}, 1.0), static_cast<std::uint8_t>(i % 10)});
  }
  return data;
}

}  // namespace fax::testing

#endif  // FAX_TESTS_FIXTURES_HPP_
