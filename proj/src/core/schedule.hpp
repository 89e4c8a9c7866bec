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
#include <string>
#include <variant>

namespace fax {

namespace schedule {

/// alpha = epoch / total_epochs.
struct Linear {};

struct Constant {
  double value = 0.0;
};

/// 0 before k1*E, then k2.
struct Step {
  double k1 = 0.0;
  double k2 = 1.0;
};

/// Rises linearly to k2 over the first k1*E epochs, then linearly to 1.
struct PiecewiseLinear {
  double k1 = 0.5;
  double k2 = 0.5;
};

}  // namespace schedule

using AlphaSchedule = std::variant<schedule::Linear, schedule::Constant, schedule::Step, schedule::PiecewiseLinear>;

/// Throws ConfigError if any parameter leaves [0,1] or PiecewiseLinear has
/// k1 outside (0,1).
void validate(const AlphaSchedule &schedule);

/// Continuation parameter for `epoch` (0-based) of `total_epochs`, clamped to
/// [0,1]. Requires total_epochs >= 1 and epoch <= total_epochs.
double alpha_at(const AlphaSchedule &schedule, std::size_t epoch, std::size_t total_epochs);

/// Text forms: "linear", "constant:C", "step:K1:K2", "piecewise:K1:K2".
AlphaSchedule parse_schedule(const std::string &text);
std::string format_schedule(const AlphaSchedule &schedule);

/// Maps alpha to a mixing probability / blend weight. Only the identity ships.
enum class RateFunction { kIdentity };

double rate(RateFunction g, double alpha);
RateFunction parse_rate(const std::string &text);
std::string to_string(RateFunction g);

}  // namespace fax
