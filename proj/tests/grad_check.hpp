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
#ifndef FAX_TESTS_GRAD_CHECK_HPP_
#define FAX_TESTS_GRAD_CHECK_HPP_

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "core/network.hpp"

namespace fax::testing {

struct GradReport {
  std::string architecture;
  std::size_t params = 0;
  std::size_t checked = 0;
  std::size_t kinks = 0;
  double max_rel_error = 0.0;
};

/// A small conv net (well under 5k parameters) drawn from `seed`.
inline std::string random_small_architecture(std::mt19937_64 &gen, Shape3 &input) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
  input = Shape3{static_cast<std::size_t>(pick(1, 3)), static_cast<std::size_t>(pick(7, 10)), 0};
  input.width = input.height;
  std::string arch = "conv:" + std::to_string(pick(1, 4)) + ":" + std::to_string(pick(2, 3));
  if (pick(0, 2) == 0) arch += ":2";
  arch += pick(0, 1) ? ",relu" : "";
  if (pick(0, 1)) arch += ",pool:2";
  arch += ",flatten";
  if (pick(0, 1)) arch += ",dense:" + std::to_string(pick(3, 12)) + ",relu";
  arch += ",dense:" + std::to_string(pick(2, 10));
  return arch;
}

/// Compares every analytic gradient entry with the central difference
/// (f(t+h) - f(t-h)) / 2h, h = 1e-4. Relative error uses max(|a|, |n|, 1e-6)
/// as denominator. An entry whose h and h/2 differences disagree straddles a
/// ReLU or max-pool switch and is counted as a kink instead.
inline GradReport gradient_check(std::string arch, std::uint64_t seed, Shape3 input = {2, 8, 8}) {
  std::mt19937_64 gen(seed * 7919 + 1);
  if (arch.empty()) arch = random_small_architecture(gen, input);
  GradReport report;
  report.architecture = arch;
  NetworkState net = init_network(parse_architecture(arch), input, seed);
  for (auto &p : net.params) {
    for (double &b : p.bias) b = std::normal_distribution<double>(0.0, 0.1)(gen);
  }
  report.params = parameter_count(net.params);
  const std::size_t classes = net.num_outputs();

  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ImageTensor> batch;
  std::vector<SoftTarget> targets;
  for (int i = 0; i < 3; ++i) {
    ImageTensor img(input);
    for (double &v : img.values()) v = u(gen);
    batch.push_back(std::move(img));
    std::uniform_int_distribution<std::size_t> cls(0, classes - 1);
    targets.push_back(SoftTarget{cls(gen), cls(gen), u(gen)});
  }

  const LossAndGrads analytic = loss_and_grads(net, batch, targets);
  const double h = 1e-4;
  auto central = [&](double &theta, double step) {
    const double saved = theta;
    theta = saved + step;
    const double up = loss_only(net, batch, targets);
    theta = saved - step;
    const double down = loss_only(net, batch, targets);
    theta = saved;
    return (up - down) / (2 * step);
  };
  for (std::size_t l = 0; l < net.params.size(); ++l) {
    for (int which = 0; which < 2; ++which) {
      auto &buf = which == 0 ? net.params[l].weights : net.params[l].bias;
      const auto &grad = which == 0 ? analytic.grads[l].weights : analytic.grads[l].bias;
      for (std::size_t i = 0; i < buf.size(); ++i) {
        const double numeric = central(buf[i], h);
        const double a = grad[i];
        const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
        if (rel > 1e-4) {
          const double half = central(buf[i], h / 2);
          if (std::abs(half - numeric) / std::max({std::abs(half), std::abs(numeric), 1e-6}) > 1e-6) {
            ++report.kinks;
            continue;
          }
        }
        ++report.checked;
        report.max_rel_error = std::max(report.max_rel_error, rel);
      }
    }
  }
  return report;
}

}  // namespace fax::testing

#endif  // FAX_TESTS_GRAD_CHECK_HPP_
