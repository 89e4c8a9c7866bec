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
#include "core/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace fax {

Rgb Palette::mean_color() const {
  Rgb sum{0.0, 0.0, 0.0};
  for (const auto &m : means) {
    for (std::size_t k = 0; k < 3; ++k) sum[k] += m[k];
  }
  for (double &v : sum) v /= 10.0;
  return sum;
}

Rgb hsv_to_rgb(double h, double s, double v) {
  const double h6 = (h - std::floor(h)) * 6.0;
  const int sector = static_cast<int>(std::floor(h6)) % 6;
  const double f = h6 - std::floor(h6);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  switch (sector) {
    case 0:
      return {v, t, p};
    case 1:
      return {q, v, p};
    case 2:
      return {p, v, t};
    case 3:
      return {p, q, v};
    case 4:
      return {t, p, v};
    default:
      return {v, p, q};
  }
}

Palette make_palette(std::uint64_t seed, double sigma2) {
  Palette palette;
  palette.seed = seed;
  palette.sigma2 = sigma2;
  for (std::size_t i = 0; i < palette.means.size(); ++i) {
    palette.means[i] = hsv_to_rgb(static_cast<double>(i) / 10.0, 1.0, 1.0);
  }
  return palette;
}

std::string to_string(Split split) { return split == Split::kTrainBiased ? "train_biased" : "test_unbiased"; }

Rgb draw_color_unclamped(const Rgb &mean, double sigma2, KeyedRng &rng) {
  const double sd = std::sqrt(sigma2);
  Rgb c{};
  for (std::size_t k = 0; k < 3; ++k) c[k] = mean[k] + sd * rng.normal();
  return c;
}

ImageTensor colorize(std::span<const std::uint8_t> img, std::size_t rows, std::size_t cols, std::size_t label,
                     const Palette &palette, Split split, KeyedRng &rng, Rgb *color_out) {
  if (label >= palette.means.size()) throw ConfigError("class " + std::to_string(label) + " outside 0-9");
  if (img.size() != rows * cols) throw ShapeError("digit buffer does not match " + std::to_string(rows) + "x" +
                                                  std::to_string(cols));
  const Rgb mean = split == Split::kTrainBiased ? palette.means[label] : palette.mean_color();
  Rgb c = draw_color_unclamped(mean, palette.sigma2, rng);
  for (double &v : c) v = std::clamp(v, 0.0, 1.0);
  if (color_out != nullptr) *color_out = c;
  ImageTensor out(Shape3{3, rows, cols});
  auto o = out.values();
  const std::size_t plane = rows * cols;
  for (std::size_t p = 0; p < plane; ++p) {
    const double intensity = img[p] / 255.0;
    for (std::size_t k = 0; k < 3; ++k) o[k * plane + p] = intensity * c[k];
  }
  return out;
}

ImageTensor to_grayscale(const ImageTensor &colored) {
  if (colored.channels() != 3) {
    throw ShapeError("to_grayscale expects 3 channels, got " + colored.shape().str());
  }
  ImageTensor out(colored.shape());
  const std::size_t plane = colored.height() * colored.width();
  auto in = colored.values();
  auto o = out.values();
  for (std::size_t p = 0; p < plane; ++p) {
    const double r = in[p];
    const double g = in[plane + p];
    const double b = in[2 * plane + p];
    const double gray = (r == g && g == b) ? r : (r + g + b) / 3.0;
    o[p] = o[plane + p] = o[2 * plane + p] = gray;
  }
  return out;
}

ColoredMnistSet build_colored_split(const RawMnist &raw, const Palette &palette, Split split, std::size_t subset_size,
                                    std::uint64_t seed) {
  if (subset_size > raw.count()) {
    throw ConfigError("subset size " + std::to_string(subset_size) + " exceeds the " + std::to_string(raw.count()) +
                      " available " + to_string(split) + " digits");
  }
  const std::uint64_t split_key = split == Split::kTrainBiased ? 0 : 1;
  std::vector<std::size_t> chosen;
  if (subset_size == raw.count()) {
    chosen.resize(raw.count());
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
  } else {
    KeyedRng rng(seed, RngDomain::kSubset, split_key);
    chosen = shuffled_indices(raw.count(), rng);
    chosen.resize(subset_size);
    std::sort(chosen.begin(), chosen.end());
  }

  ColoredMnistSet set;
  set.split = split;
  set.palette = palette;
  set.source_index = chosen;
  set.colors.reserve(chosen.size());
  for (std::size_t src : chosen) {
    KeyedRng rng(seed, RngDomain::kColor, split_key, src);
    Rgb color{};
    ImageTensor x1 = colorize(raw.image(src), raw.rows, raw.cols, raw.labels[src], palette, split, rng, &color);
    ImageTensor x0 = to_grayscale(x1);
    set.pairs.push_back(PairedItem{std::move(x0), std::move(x1), raw.labels[src]});
    set.colors.push_back(color);
  }
  return set;
}

ColoredMnist build_colored_mnist(const RawMnist &train_raw, const RawMnist &test_raw, const Palette &palette,
                                 std::size_t train_size, std::size_t test_size, std::uint64_t seed) {
  return {build_colored_split(train_raw, palette, Split::kTrainBiased, train_size, seed),
          build_colored_split(test_raw, palette, Split::kTestUnbiased, test_size, seed)};
}

namespace {

constexpr std::size_t kSide = 28;
constexpr std::size_t kLattice = 5;

bool inside(ShapeClass shape, double x, double y, double cx, double cy, double r) {
  const double dx = x - cx;
  const double dy = y - cy;
  switch (shape) {
    case ShapeClass::kDisk:
      return dx * dx + dy * dy <= r * r;
    case ShapeClass::kSquare:
      return std::abs(dx) <= 0.8 * r && std::abs(dy) <= 0.8 * r;
    case ShapeClass::kTriangle:
      // apex at the top, base at cy + r
      return dy >= -r && dy <= r && std::abs(dx) <= 0.5 * (dy + r);
    case ShapeClass::kCross: {
      const double arm = r / 3.0;
      return (std::abs(dx) <= arm && std::abs(dy) <= r) || (std::abs(dy) <= arm && std::abs(dx) <= r);
    }
  }
  return false;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

/// Bilinear value noise over a kLattice x kLattice grid per channel.
ImageTensor value_noise(KeyedRng &rng) {
  std::array<std::array<double, kLattice * kLattice>, 3> grid{};
  for (auto &channel : grid) {
    for (double &v : channel) v = rng.uniform();
  }
  ImageTensor out(Shape3{3, kSide, kSide});
  const double scale = static_cast<double>(kLattice - 1) / static_cast<double>(kSide - 1);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < kSide; ++y) {
      const double gy = static_cast<double>(y) * scale;
      const std::size_t y0 = std::min(static_cast<std::size_t>(gy), kLattice - 2);
      const double ty = smoothstep(gy - static_cast<double>(y0));
      for (std::size_t x = 0; x < kSide; ++x) {
        const double gx = static_cast<double>(x) * scale;
        const std::size_t x0 = std::min(static_cast<std::size_t>(gx), kLattice - 2);
        const double tx = smoothstep(gx - static_cast<double>(x0));
        const auto &g = grid[c];
        const double top = g[y0 * kLattice + x0] * (1 - tx) + g[y0 * kLattice + x0 + 1] * tx;
        const double bottom = g[(y0 + 1) * kLattice + x0] * (1 - tx) + g[(y0 + 1) * kLattice + x0 + 1] * tx;
        out.at(c, y, x) = std::clamp(top * (1 - ty) + bottom * ty, 0.0, 1.0);
      }
    }
  }
  return out;
}

}  // namespace

CompositeSet make_composite_set(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("composite set size must be >= 1");
  CompositeSet set;
  set.masks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto shape = static_cast<ShapeClass>(i % kNumShapeClasses);
    KeyedRng rng(seed, RngDomain::kComposite, 0, i);
    const double cx = 9.0 + 10.0 * rng.uniform();
    const double cy = 9.0 + 10.0 * rng.uniform();
    const double r = 5.0 + 3.0 * rng.uniform();
    Rgb fg{};
    for (double &v : fg) v = 0.5 + 0.5 * rng.uniform();

    ImageTensor x0(Shape3{3, kSide, kSide});
    ImageTensor x1 = value_noise(rng);
    std::vector<std::uint8_t> mask(kSide * kSide, 0);
    for (std::size_t y = 0; y < kSide; ++y) {
      for (std::size_t x = 0; x < kSide; ++x) {
        if (!inside(shape, static_cast<double>(x), static_cast<double>(y), cx, cy, r)) continue;
        mask[y * kSide + x] = 1;
        for (std::size_t c = 0; c < 3; ++c) x0.at(c, y, x) = x1.at(c, y, x) = fg[c];
      }
    }
    set.pairs.push_back(PairedItem{std::move(x0), std::move(x1), static_cast<std::uint8_t>(shape)});
    set.masks.push_back(std::move(mask));
  }
  return set;
}

}  // namespace fax
