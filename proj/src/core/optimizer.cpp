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
#include "core/optimizer.hpp"

#include <cmath>

namespace fax {

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::kAdam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer_kind(const std::string &text) {
  if (text == "sgd") return OptimizerKind::kSgdMomentum;
  if (text == "adam") return OptimizerKind::kAdam;
  throw ConfigError("unknown optimizer '" + text + "' (expected sgd or adam)");
}

void OptimizerConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ConfigError("learning_rate must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
}

namespace {

void sgd_update(AlignedBuffer &theta, const AlignedBuffer &g, AlignedBuffer &m,
                const OptimizerConfig &cfg) {
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double grad = g[j] + cfg.weight_decay * theta[j];
    m[j] = cfg.momentum * m[j] + grad;
    theta[j] -= cfg.learning_rate * m[j];
  }
}

void adam_update(AlignedBuffer &theta, const AlignedBuffer &g, AlignedBuffer &m,
                 AlignedBuffer &v, double correction1, double correction2, const OptimizerConfig &cfg) {
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double grad = g[j] + cfg.weight_decay * theta[j];
    m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * grad;
    v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * grad * grad;
    const double mhat = m[j] / correction1;
    const double vhat = v[j] / correction2;
    theta[j] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
  }
}

}  // namespace

void optimizer_step(NetworkState &net, const ParamSet &grads, const OptimizerConfig &cfg) {
  if (grads.size() != net.params.size()) {
    throw ShapeError("gradient set has " + std::to_string(grads.size()) + " layers, network has " +
                     std::to_string(net.params.size()));
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (grads[i].weights.size() != net.params[i].weights.size() || grads[i].bias.size() != net.params[i].bias.size()) {
      throw ShapeError("gradient buffers of layer " + std::to_string(i) + " do not match its parameters");
    }
  }
  ++net.step;
  const double correction1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(net.step));
  const double correction2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(net.step));
  for (std::size_t i = 0; i < grads.size(); ++i) {
    auto &p = net.params[i];
    auto &m = net.moment1[i];
    auto &v = net.moment2[i];
    if (cfg.kind == OptimizerKind::kSgdMomentum) {
      sgd_update(p.weights, grads[i].weights, m.weights, cfg);
      sgd_update(p.bias, grads[i].bias, m.bias, cfg);
    } else {
      adam_update(p.weights, grads[i].weights, m.weights, v.weights, correction1, correction2, cfg);
      adam_update(p.bias, grads[i].bias, m.bias, v.bias, correction1, correction2, cfg);
    }
  }
}

}  // namespace fax
