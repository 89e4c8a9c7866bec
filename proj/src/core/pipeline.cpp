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
#include "core/pipeline.hpp"

#include <algorithm>

#include "core/format.hpp"

namespace fax {

PairedDataset::PairedDataset(std::vector<PairedItem> items) {
  items_.reserve(items.size());
  for (auto &item : items) push_back(std::move(item));
}

void PairedDataset::push_back(PairedItem item) {
  if (item.x0.shape() != item.x1.shape()) {
    throw ShapeError("paired item " + std::to_string(items_.size()) + ": x0 is " + item.x0.shape().str() +
                     " but x1 is " + item.x1.shape().str());
  }
  if (!items_.empty() && item.x0.shape() != shape()) {
    throw ShapeError("paired item " + std::to_string(items_.size()) + " has shape " + item.x0.shape().str() +
                     ", dataset holds " + shape().str());
  }
  items_.push_back(std::move(item));
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kMixingSample:
      return "mixing";
    case Strategy::kMixingBatch:
      return "mixing_batch";
    case Strategy::kBlending:
      return "blending";
    case Strategy::kOpacityBlend:
      return "opacity";
  }
  return "mixing";
}

Strategy parse_strategy(const std::string &text) {
  if (text == "mixing" || text == "mixing_sample") return Strategy::kMixingSample;
  if (text == "mixing_batch") return Strategy::kMixingBatch;
  if (text == "blending") return Strategy::kBlending;
  if (text == "opacity" || text == "opacity_blend") return Strategy::kOpacityBlend;
  throw ConfigError("unknown strategy '" + text + "' (expected mixing, mixing_batch, blending or opacity)");
}

void StreamConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
}

ImageTensor blend(const ImageTensor &x0, const ImageTensor &x1, double w) {
  if (x0.shape() != x1.shape()) {
    throw ShapeError("blend: x0 is " + x0.shape().str() + " but x1 is " + x1.shape().str());
  }
  if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("blend weight must lie in [0, 1]");
  if (w == 0.0) return x0;
  if (w == 1.0) return x1;
  ImageTensor out(x0.shape());
  auto a = x0.values();
  auto b = x1.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::clamp((1.0 - w) * a[i] + w * b[i], 0.0, 1.0);
  return out;
}

Source mix_draw(KeyedRng &rng, double w) { return rng.uniform() < w ? Source::kFull : Source::kFocused; }

EpochStream::EpochStream(const PairedDataset &data, const StreamConfig &cfg, std::size_t epoch)
    : data_(data), cfg_(cfg), epoch_(epoch) {
  cfg_.validate();
  if (data.empty()) throw ConfigError("cannot stream an empty dataset");
  KeyedRng rng(cfg.seed, RngDomain::kShuffle, epoch);
  order_ = shuffled_indices(data.size(), rng);
}

std::size_t EpochStream::num_batches() const { return (order_.size() + cfg_.batch_size - 1) / cfg_.batch_size; }

Batch EpochStream::batch(std::size_t index) const {
  const std::size_t begin = index * cfg_.batch_size;
  const std::size_t end = std::min(begin + cfg_.batch_size, order_.size());
  const double w = rate(cfg_.rate, cfg_.alpha);
  Batch out;
  out.images.reserve(end - begin);
  // one draw shared by the whole batch; its key lives past every item index
  Source batch_source = Source::kFocused;
  if (cfg_.strategy == Strategy::kMixingBatch) {
    KeyedRng rng(cfg_.seed, RngDomain::kMixDraw, epoch_, (std::uint64_t{1} << 63) | index);
    batch_source = mix_draw(rng, w);
  }
  for (std::size_t pos = begin; pos < end; ++pos) {
    const std::size_t item = order_[pos];
    const PairedItem &pair = data_[item];
    double weight = 0.0;
    switch (cfg_.strategy) {
      case Strategy::kMixingSample: {
        KeyedRng rng(cfg_.seed, RngDomain::kMixDraw, epoch_, item);
        weight = mix_draw(rng, w) == Source::kFull ? 1.0 : 0.0;
        break;
      }
      case Strategy::kMixingBatch:
        weight = batch_source == Source::kFull ? 1.0 : 0.0;
        break;
      case Strategy::kBlending:
        weight = w;
        break;
      case Strategy::kOpacityBlend: {
        KeyedRng rng(cfg_.seed, RngDomain::kOpacity, epoch_, item);
        weight = w * rng.uniform();
        break;
      }
    }
    out.images.push_back(blend(pair.x0, pair.x1, weight));
    out.labels.push_back(pair.label);
    out.items.push_back(item);
    out.weights.push_back(weight);
  }
  return out;
}

std::vector<Batch> EpochStream::materialize() const {
  std::vector<Batch> batches;
  batches.reserve(num_batches());
  for (std::size_t b = 0; b < num_batches(); ++b) batches.push_back(batch(b));
  return batches;
}

EpochStream epoch_stream(const PairedDataset &data, const StreamConfig &cfg, std::size_t epoch) {
  return EpochStream(data, cfg, epoch);
}

namespace {

void hash_image(Fnv1a &h, const ImageTensor &img, std::uint8_t label) {
  h.update(img.values().data(), img.values().size_bytes());
  h.update(&label, 1);
}

}  // namespace

std::string stream_digest(const EpochStream &stream) {
  Fnv1a h;
  for (std::size_t b = 0; b < stream.num_batches(); ++b) {
    const Batch batch = stream.batch(b);
    for (std::size_t i = 0; i < batch.size(); ++i) hash_image(h, batch.images[i], batch.labels[i]);
  }
  return h.hex();
}

std::string dataset_digest(const PairedDataset &data, const std::vector<std::size_t> &order, Source source) {
  Fnv1a h;
  for (std::size_t item : order) {
    const PairedItem &pair = data[item];
    hash_image(h, source == Source::kFull ? pair.x1 : pair.x0, pair.label);
  }
  return h.hex();
}

}  // namespace fax
