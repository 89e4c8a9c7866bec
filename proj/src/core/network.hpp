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
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "core/tensor.hpp"

namespace fax {

struct Conv2D {
  std::size_t out_channels = 0;
  std::size_t kernel = 0;
  std::size_t stride = 1;
};
struct MaxPool {
  std::size_t size = 2;
};
struct ReLU {};
struct Flatten {};
struct Dense {
  std::size_t out = 0;
};

using LayerSpec = std::variant<Conv2D, MaxPool, ReLU, Flatten, Dense>;

std::string layer_name(const LayerSpec &layer);

/// Conv(32,5x5)-ReLU-MaxPool(2)-Conv(64,5x5)-ReLU-MaxPool(2)-Flatten-Dense(128)-ReLU-Dense(10).
std::vector<LayerSpec> default_architecture();

/// Compact text form, e.g. "conv:32:5,relu,pool:2,flatten,dense:10".
/// Conv takes an optional third field for the stride.
std::string format_architecture(std::span<const LayerSpec> layers);
std::vector<LayerSpec> parse_architecture(std::string_view text);

/// Activation shape flowing between layers. Flat activations are stored as
/// {n, 1, 1} with `flat` set.
struct ActShape {
  Shape3 dims;
  bool flat = false;

  std::size_t size() const { return dims.size(); }
};

/// Shapes entering and leaving every layer. Throws ShapeError naming the
/// first layer that cannot accept its input.
std::vector<ActShape> layer_shapes(std::span<const LayerSpec> layers, Shape3 input);

/// Buffer at Eigen's maximum alignment.
using AlignedBuffer = std::vector<double, Eigen::aligned_allocator<double>>;

/// Weight/bias storage for one layer; both empty for parameterless layers.
/// Conv weights are O x (C*k*k) row-major, dense weights O x In.
struct ParamBuffers {
  AlignedBuffer weights;
  AlignedBuffer bias;

  bool operator==(const ParamBuffers &) const = default;
};

using ParamSet = std::vector<ParamBuffers>;

/// Zero-filled buffers with the same layout as `like`.
ParamSet zeros_like(const ParamSet &like);
std::size_t parameter_count(const ParamSet &params);

struct NetworkState {
  Shape3 input;
  std::vector<LayerSpec> layers;
  ParamSet params;
  /// SGD momentum buffer, or Adam first moment.
  ParamSet moment1;
  /// Adam second moment (kept zero under SGD).
  ParamSet moment2;
  std::uint64_t step = 0;

  std::size_t num_outputs() const;
};

/// Fan-in scaled normal weights (std = sqrt(2/fan_in)), zero biases, zero
/// moments. Deterministic per seed.
NetworkState init_network(std::span<const LayerSpec> layers, Shape3 input, std::uint64_t seed);

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Batch x outputs logits. Pure: no parameter mutation.
Matrix forward(const NetworkState &net, std::span<const ImageTensor> batch);

/// Row-wise softmax.
Matrix softmax_rows(const Matrix &logits);

/// Cross-entropy target: weight `lambda` on class `a` and 1-lambda on `b`.
/// Hard labels are {y, y, 1}.
struct SoftTarget {
  std::size_t a = 0;
  std::size_t b = 0;
  double lambda = 1.0;

  static SoftTarget hard(std::size_t y) { return {y, y, 1.0}; }
};

struct LossAndGrads {
  double loss = 0.0;
  ParamSet grads;
};

/// Mean softmax cross-entropy over the batch and its gradient. Per-item loss
/// is lambda*CE(a) + (1-lambda)*CE(b). Gradients are accumulated in item
/// order, so results are bit-reproducible.
LossAndGrads loss_and_grads(const NetworkState &net, std::span<const ImageTensor> batch,
                            std::span<const SoftTarget> targets);

/// Loss only; same arithmetic as loss_and_grads.
double loss_only(const NetworkState &net, std::span<const ImageTensor> batch, std::span<const SoftTarget> targets);

/// Binary snapshot of architecture and parameters (moments are not stored).
void save_network(const NetworkState &net, const std::string &path);
NetworkState load_network(const std::string &path);

}  // namespace fax
