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
#include <span>
#include <string>
#include <vector>

#include "core/network.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"

namespace fax {

enum class AugmentMode { kMixup, kCutMix };

std::string to_string(AugmentMode mode);
AugmentMode parse_augment_mode(const std::string &text);

/// Source of the raw mixing strength lambda: Uniform(0,1) by default, or
/// Beta(a, a) as in the original Mixup recipe.
struct LambdaDistribution {
  enum class Kind { kUniform, kBeta } kind = Kind::kUniform;
  double beta_a = 1.0;

  double draw(KeyedRng &rng) const;
};

std::string to_string(const LambdaDistribution &dist);
LambdaDistribution parse_lambda_distribution(const std::string &text);

/// Augmented images with per-item mixed targets: weight lambda on `a`
/// (the item itself), 1-lambda on `b` (its partner).
struct MixedBatch {
  std::vector<ImageTensor> images;
  std::vector<SoftTarget> targets;
  bool augmented = false;
  /// Mixing strength actually applied (1 for original batches).
  double lambda = 1.0;
};

/// lambda' = (1 - alpha) * lambda + alpha.
double fax_lambda(double lambda, double alpha);

/// image_i = lambda*x_i + (1-lambda)*x_perm(i); targets (y_i, y_perm(i), lambda).
MixedBatch mixup(std::span<const ImageTensor> images, std::span<const std::uint8_t> labels,
                 std::span<const std::size_t> perm, double lambda);

/// Half-open pixel rectangle [y0,y1) x [x0,x1).
struct Box {
  std::size_t y0 = 0, x0 = 0, y1 = 0, x1 = 0;

  std::size_t area() const { return (y1 - y0) * (x1 - x0); }
};

/// Square of side round(sqrt((1-lambda)*H*W)) centred at (cy, cx), clipped
/// to the image.
Box cutmix_box(std::size_t height, std::size_t width, double lambda, std::size_t cy, std::size_t cx);

/// Pastes `box` from x_perm(i) into x_i; lambda_eff = 1 - area/(H*W).
MixedBatch cutmix_with_box(std::span<const ImageTensor> images, std::span<const std::uint8_t> labels,
                           std::span<const std::size_t> perm, const Box &box);

/// CutMix with the box centre drawn uniformly from `rng`.
MixedBatch cutmix(std::span<const ImageTensor> images, std::span<const std::uint8_t> labels,
                  std::span<const std::size_t> perm, double lambda, KeyedRng &rng);

struct AugmentConfig {
  AugmentMode mode = AugmentMode::kMixup;
  RateFunction rate = RateFunction::kIdentity;
  LambdaDistribution lambda;
  std::uint64_t seed = 0;
};

/// Batch-resolution mixing: with probability g(alpha) the batch passes
/// through with hard labels, otherwise it is augmented with
/// lambda' = fax_lambda(lambda, alpha). Keyed by (seed, epoch, batch_index).
MixedBatch augment_batch(const Batch &batch, double alpha, const AugmentConfig &cfg, std::size_t epoch,
                         std::size_t batch_index);

std::vector<MixedBatch> augmented_epoch(std::span<const Batch> batches, double alpha, const AugmentConfig &cfg,
                                        std::size_t epoch);

}  // namespace fax
