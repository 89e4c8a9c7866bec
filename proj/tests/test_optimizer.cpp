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
#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/optimizer.hpp"

using namespace fax;

namespace {

/// One weight and one bias: flatten,dense:1 on a 1x1x1 input.
NetworkState scalar_net(double theta) {
  auto net = init_network(parse_architecture("flatten,dense:1"), Shape3{1, 1, 1}, 0);
  net.params[1].weights = {theta};
  return net;
}

ParamSet scalar_grad(double g) { return ParamSet{{}, ParamBuffers{{g}, {0.0}}}; }

}  // namespace

TEST_CASE("plain SGD step") {
  auto net = scalar_net(1.0);
  OptimizerConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.momentum = 0.0;
  cfg.weight_decay = 0.0;
  optimizer_step(net, scalar_grad(2.0), cfg);
  CHECK(net.params[1].weights[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(net.step == 1);
}

TEST_CASE("momentum recurrence") {
  auto net = scalar_net(0.0);
  OptimizerConfig cfg;
  cfg.learning_rate = 1.0;
  cfg.momentum = 0.9;
  cfg.weight_decay = 0.0;
  optimizer_step(net, scalar_grad(1.0), cfg);
  CHECK(net.params[1].weights[0] == -1.0);
  optimizer_step(net, scalar_grad(1.0), cfg);
  CHECK(net.params[1].weights[0] == doctest::Approx(-2.9).epsilon(1e-15));
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
  for (auto kind : {OptimizerKind::kSgdMomentum, OptimizerKind::kAdam}) {
    auto net = init_network(default_architecture(), kMnistShape, 5);
    const auto before = net.params;
    ParamSet grads = zeros_like(net.params);
    for (auto &p : grads) {
      for (double &g : p.weights) g = 3.0;
      for (double &g : p.bias) g = -1.0;
    }
    OptimizerConfig cfg;
    cfg.kind = kind;
    cfg.learning_rate = 0.0;
    optimizer_step(net, grads, cfg);
    CHECK(net.params == before);
  }
}

TEST_CASE("weight decay enters the gradient") {
  auto net = scalar_net(2.0);
  OptimizerConfig cfg;
  cfg.learning_rate = 0.5;
  cfg.momentum = 0.0;
  cfg.weight_decay = 0.1;
  optimizer_step(net, scalar_grad(0.0), cfg);
  CHECK(net.params[1].weights[0] == doctest::Approx(2.0 - 0.5 * 0.2).epsilon(1e-15));
}

TEST_CASE("Adam matches its bias-corrected recurrence") {
  auto net = scalar_net(0.5);
  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::kAdam;
  cfg.learning_rate = 0.01;
  cfg.weight_decay = 0.0;
  double theta = 0.5, m = 0, v = 0;
  const double gs[] = {0.3, -0.2, 0.7, 0.1};
  for (int t = 1; t <= 4; ++t) {
    const double g = gs[t - 1];
    optimizer_step(net, scalar_grad(g), cfg);
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    theta -= 0.01 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    CHECK(net.params[1].weights[0] == doctest::Approx(theta).epsilon(1e-13));
  }
}

TEST_CASE("optimizer errors") {
  auto net = scalar_net(1.0);
  CHECK_THROWS_AS(optimizer_step(net, ParamSet{}, OptimizerConfig{}), ShapeError);
  CHECK_THROWS_AS(optimizer_step(net, ParamSet{{}, ParamBuffers{{1.0, 2.0}, {0.0}}}, OptimizerConfig{}), ShapeError);
  OptimizerConfig bad;
  bad.momentum = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(parse_optimizer_kind("rmsprop"), ConfigError);
  CHECK(parse_optimizer_kind("adam") == OptimizerKind::kAdam);
}
