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
#include "core/augment.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/format.hpp"

namespace fax {

std::string to_string(AugmentMode mode) { return mode == AugmentMode::kCutMix ? "cutmix" : "mixup"; }

AugmentMode parse_augment_mode(const std::string &text) {
  if (text == "mixup") return AugmentMode::kMixup;
  if (text == "cutmix") return AugmentMode::kCutMix;
  throw ConfigError("unknown augmentation '" + text + "' (expected mixup or cutmix)");
}

double LambdaDistribution::draw(KeyedRng &rng) const {
  if (kind == Kind::kUniform) return rng.uniform_open();
  std::gamma_distribution<double> gamma(beta_a, 1.0);
  const double x = gamma(rng);
  const double y = gamma(rng);
  return x + y > 0.0 ? x / (x + y) : 0.5;
}

std::string to_string(const LambdaDistribution &dist) {
  return dist.kind == LambdaDistribution::Kind::kUniform ? "uniform" : "beta:" + format_double(dist.beta_a);
}

LambdaDistribution parse_lambda_distribution(const std::string &text) {
  if (text == "uniform") return {};
  if (text.rfind("beta:", 0) == 0) {
    LambdaDistribution d{LambdaDistribution::Kind::kBeta, parse_double(text.substr(5), "beta parameter")};
    if (!(d.beta_a > 0.0)) throw ConfigError("beta parameter must be > 0");
    return d;
  }
  throw ConfigError("unknown lambda distribution '" + text + "' (expected uniform or beta:A)");
}

double fax_lambda(double lambda, double alpha) { return (1.0 - alpha) * lambda + alpha; }

namespace {

void check_pairing(std::span<const ImageTensor> images, std::span<const std::uint8_t> labels,
                   std::span<const std::size_t> perm) {
  if (labels.size() != images.size() || perm.size() != images.size()) {
    throw ShapeError("images, labels and pairing permutation must have equal lengths");
  }
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) throw ConfigError("pairing is not a permutation of the batch indices");
    seen[p] = true;
  }
  for (const auto &img : images) {
    if (img.shape() != images.front().shape()) throw ShapeError("batch images differ in shape");
  }
}

}  // namespace

MixedBatch mixup(std::span<const ImageTensor> images, std::span<const std::uint8_t> labels,
                 std::span<const std::size_t> perm, double lambda) {
  check_pairing(images, labels, perm);
  MixedBatch out;
  out.augmented = true;
  out.lambda = lambda;
  out.images.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ImageTensor &a = images[i];
    const ImageTensor &b = images[perm[i]];
    ImageTensor mixed(a.shape());
    auto o = mixed.values();
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t j = 0; j < o.size(); ++j) o[j] = std::clamp(lambda * av[j] + (1.0 - lambda) * bv[j], 0.0, 1.0);
    out.images.push_back(std::move(mixed));
    out.targets.push_back(SoftTarget{labels[i], labels[perm[i]], lambda});
  }
  return out;
}

Box cutmix_box(std::size_t height, std::size_t width, double lambda, std::size_t cy, std::size_t cx) {
  const double side_f = std::sqrt(std::max(0.0, 1.0 - lambda) * static_cast<double>(height * width));
  const auto side = static_cast<long long>(std::llround(side_f));
  const auto half = side / 2;
  const auto clip = [](long long v, std::size_t hi) {
    return static_cast<std::size_t>(std::clamp<long long>(v, 0, static_cast<long long>(hi)));
  };
  const long long top = static_cast<long long>(cy) - half;
  const long long left = static_cast<long long>(cx) - half;
  return Box{clip(top, height), clip(left, width), clip(top + side, height), clip(left + side, width)};
}

MixedBatch cutmix_with_box(std::span<const ImageTensor> images, std::span<const std::uint8_t> labels,
                           std::span<const std::size_t> perm, const Box &box) {
  check_pairing(images, labels, perm);
  MixedBatch out;
  out.augmented = true;
  if (images.empty()) return out;
  const Shape3 shape = images.front().shape();
  const double lambda_eff = 1.0 - static_cast<double>(box.area()) / static_cast<double>(shape.height * shape.width);
  out.lambda = lambda_eff;
  out.images.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    ImageTensor mixed = images[i];
    const ImageTensor &donor = images[perm[i]];
    for (std::size_t c = 0; c < shape.channels; ++c) {
      for (std::size_t y = box.y0; y < box.y1; ++y) {
        for (std::size_t x = box.x0; x < box.x1; ++x) mixed.at(c, y, x) = donor.at(c, y, x);
      }
    }
    out.images.push_back(std::move(mixed));
    out.targets.push_back(SoftTarget{labels[i], labels[perm[i]], lambda_eff});
  }
  return out;
}

MixedBatch cutmix(std::span<const ImageTensor> images, std::span<const std::uint8_t> labels,
                  std::span<const std::size_t> perm, double lambda, KeyedRng &rng) {
  if (images.empty()) return cutmix_with_box(images, labels, perm, Box{});
  const Shape3 shape = images.front().shape();
  const std::size_t cy = rng.below(shape.height);
  const std::size_t cx = rng.below(shape.width);
  return cutmix_with_box(images, labels, perm, cutmix_box(shape.height, shape.width, lambda, cy, cx));
}

MixedBatch augment_batch(const Batch &batch, double alpha, const AugmentConfig &cfg, std::size_t epoch,
                         std::size_t batch_index) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  KeyedRng gate(cfg.seed, RngDomain::kAugmentGate, epoch, batch_index);
  if (gate.uniform() < rate(cfg.rate, alpha)) {
    MixedBatch out;
    out.images = batch.images;
    for (auto y : batch.labels) out.targets.push_back(SoftTarget::hard(y));
    return out;
  }
  KeyedRng lambda_rng(cfg.seed, RngDomain::kAugmentLambda, epoch, batch_index);
  const double lambda = fax_lambda(cfg.lambda.draw(lambda_rng), alpha);
  KeyedRng pairing_rng(cfg.seed, RngDomain::kPairing, epoch, batch_index);
  const auto perm = shuffled_indices(batch.size(), pairing_rng);
  if (cfg.mode == AugmentMode::kMixup) return mixup(batch.images, batch.labels, perm, lambda);
  KeyedRng box_rng(cfg.seed, RngDomain::kCutMixBox, epoch, batch_index);
  return cutmix(batch.images, batch.labels, perm, lambda, box_rng);
}

std::vector<MixedBatch> augmented_epoch(std::span<const Batch> batches, double alpha, const AugmentConfig &cfg,
                                        std::size_t epoch) {
  std::vector<MixedBatch> out;
  out.reserve(batches.size());
  for (std::size_t b = 0; b < batches.size(); ++b) out.push_back(augment_batch(batches[b], alpha, cfg, epoch, b));
  return out;
}

}  // namespace fax
