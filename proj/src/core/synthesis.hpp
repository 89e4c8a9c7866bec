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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/idx.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"

namespace fax {

using Rgb = std::array<double, 3>;

/// Allowed color variances for colored MNIST.
inline constexpr std::array<double, 7> kSigma2Levels{0.020, 0.025, 0.030, 0.035, 0.040, 0.045, 0.050};

struct Palette {
  std::array<Rgb, 10> means{};
  double sigma2 = 0.02;
  std::uint64_t seed = 0;

  Rgb mean_color() const;
};

Rgb hsv_to_rgb(double h, double s, double v);

/// Ten means at hues i/10, full saturation and value.
Palette make_palette(std::uint64_t seed, double sigma2 = 0.02);

enum class Split { kTrainBiased, kTestUnbiased };

std::string to_string(Split split);

/// mean + sqrt(sigma2) * N(0, I3), before clamping.
Rgb draw_color_unclamped(const Rgb &mean, double sigma2, KeyedRng &rng);

/// Tints a single-channel digit: channel k of pixel p is (img_p/255)*c_k
/// with c drawn around mu_label (train) or the palette mean (test) and
/// clamped to [0,1]^3. `color_out` receives the clamped color if non-null.
ImageTensor colorize(std::span<const std::uint8_t> img, std::size_t rows, std::size_t cols, std::size_t label,
                     const Palette &palette, Split split, KeyedRng &rng, Rgb *color_out = nullptr);

/// Channel mean replicated into all three channels. Pixels that are already
/// gray are copied unchanged, so the map is exactly idempotent.
ImageTensor to_grayscale(const ImageTensor &colored);

struct ColoredMnistSet {
  PairedDataset pairs;
  Split split = Split::kTrainBiased;
  Palette palette;
  /// Index into the raw source of every item.
  std::vector<std::size_t> source_index;
  /// Clamped tint of every item.
  std::vector<Rgb> colors;
};

/// Deterministic subset of `subset_size` items (all of them when it equals
/// the raw count, in source order), x1 = colorize, x0 = to_grayscale(x1).
ColoredMnistSet build_colored_split(const RawMnist &raw, const Palette &palette, Split split, std::size_t subset_size,
                                    std::uint64_t seed);

struct ColoredMnist {
  ColoredMnistSet train;
  ColoredMnistSet test;
};

ColoredMnist build_colored_mnist(const RawMnist &train_raw, const RawMnist &test_raw, const Palette &palette,
                                 std::size_t train_size, std::size_t test_size, std::uint64_t seed);

/// Foreground shapes for the compositing demo. Labels are the enum values.
enum class ShapeClass : std::uint8_t { kDisk = 0, kSquare, kTriangle, kCross };
inline constexpr std::size_t kNumShapeClasses = 4;

struct CompositeSet {
  PairedDataset pairs;
  /// Per item, 28*28 foreground mask (1 inside the shape).
  std::vector<std::vector<std::uint8_t>> masks;
};

/// x0 is a colored shape on black, x1 the same shape pasted opaquely over a
/// seeded value-noise background. Classes cycle round-robin.
CompositeSet make_composite_set(std::size_t n, std::uint64_t seed);

}  // namespace fax
