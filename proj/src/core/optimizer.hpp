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

#include <string>

#include "core/network.hpp"

namespace fax {

enum class OptimizerKind { kSgdMomentum, kAdam };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string &text);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgdMomentum;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 5e-4;

  /// Throws ConfigError unless lr > 0, 0 <= momentum < 1, 0 < beta1, beta2 < 1,
  /// epsilon > 0 and weight_decay >= 0.
  void validate() const;
};

/// One update in place. Weight decay enters as g + wd*theta for both kinds.
/// SGD: m = momentum*m + g, theta -= lr*m.
/// Adam: bias-corrected moments, theta -= lr*mhat/(sqrt(vhat)+eps).
void optimizer_step(NetworkState &net, const ParamSet &grads, const OptimizerConfig &cfg);

}  // namespace fax
