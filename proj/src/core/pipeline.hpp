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
#include <cstdint>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/schedule.hpp"
#include "core/tensor.hpp"

namespace fax {

/// A focused instance x0 and its full counterpart x1 with a shared label.
struct PairedItem {
  ImageTensor x0;
  ImageTensor x1;
  std::uint8_t label = 0;
};

class PairedDataset {
 public:
  PairedDataset() = default;
  explicit PairedDataset(std::vector<PairedItem> items);

  /// Rejects items whose x0/x1 shapes differ from each other or from the
  /// items already present.
  void push_back(PairedItem item);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const PairedItem &operator[](std::size_t i) const { return items_[i]; }
  const std::vector<PairedItem> &items() const { return items_; }
  Shape3 shape() const { return items_.empty() ? Shape3{} : items_.front().x0.shape(); }

 private:
  std::vector<PairedItem> items_;
};

enum class Strategy { kMixingSample, kMixingBatch, kBlending, kOpacityBlend };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string &text);

struct StreamConfig {
  Strategy strategy = Strategy::kMixingSample;
  double alpha = 0.0;
  RateFunction rate = RateFunction::kIdentity;
  std::uint64_t seed = 0;
  std::size_t batch_size = 64;

  void validate() const;
};

enum class Source { kFocused, kFull };

/// Per-pixel (1-w)*x0 + w*x1, clamped to [0,1]. w=0 and w=1 return x0 and
/// x1 exactly.
ImageTensor blend(const ImageTensor &x0, const ImageTensor &x1, double w);

/// kFull with probability w.
Source mix_draw(KeyedRng &rng, double w);

struct Batch {
  std::vector<ImageTensor> images;
  std::vector<std::uint8_t> labels;
  /// Dataset index of every emitted item.
  std::vector<std::size_t> items;
  /// Weight of x1 in every emitted image: 0/1 under mixing, g(alpha) under
  /// blending, the drawn opacity under opacity blending.
  std::vector<double> weights;

  std::size_t size() const { return images.size(); }
};

/// One epoch of training batches. Item order is a Fisher-Yates shuffle keyed
/// by (seed, epoch); every random choice is keyed by (seed, epoch, item) or
/// (seed, epoch, batch), so any batch can be produced independently.
class EpochStream {
 public:
  EpochStream(const PairedDataset &data, const StreamConfig &cfg, std::size_t epoch);

  std::size_t num_batches() const;
  Batch batch(std::size_t index) const;
  std::vector<Batch> materialize() const;
  const std::vector<std::size_t> &order() const { return order_; }

 private:
  const PairedDataset &data_;
  StreamConfig cfg_;
  std::size_t epoch_;
  std::vector<std::size_t> order_;
};

EpochStream epoch_stream(const PairedDataset &data, const StreamConfig &cfg, std::size_t epoch);

/// FNV-1a over every emitted image's values and label, in stream order.
std::string stream_digest(const EpochStream &stream);

/// Digest of the images one would get by walking `order` over x0 (or x1)
/// directly; the reference for endpoint checks.
std::string dataset_digest(const PairedDataset &data, const std::vector<std::size_t> &order, Source source);

}  // namespace fax
