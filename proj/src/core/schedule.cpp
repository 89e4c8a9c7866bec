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
#include "core/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

#include "core/error.hpp"
#include "core/format.hpp"

namespace fax {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_unit(double v, const char *name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string("schedule parameter ") + name + " must lie in [0, 1]");
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void validate(const AlphaSchedule &schedule) {
  std::visit(Overloaded{
                 [](const schedule::Linear &) {},
                 [](const schedule::Constant &c) { check_unit(c.value, "c"); },
                 [](const schedule::Step &s) {
                   check_unit(s.k1, "k1");
                   check_unit(s.k2, "k2");
                 },
                 [](const schedule::PiecewiseLinear &p) {
                   check_unit(p.k2, "k2");
                   if (!(p.k1 > 0.0 && p.k1 < 1.0)) throw ConfigError("piecewise k1 must lie in (0, 1)");
                 },
             },
             schedule);
}

double alpha_at(const AlphaSchedule &schedule, std::size_t epoch, std::size_t total_epochs) {
  if (total_epochs == 0) throw ConfigError("total_epochs must be >= 1");
  if (epoch > total_epochs) {
    throw ConfigError("epoch " + std::to_string(epoch) + " exceeds total_epochs " + std::to_string(total_epochs));
  }
  const double e = static_cast<double>(epoch);
  const double total = static_cast<double>(total_epochs);
  const double value =
      std::visit(Overloaded{
                     [&](const schedule::Linear &) { return e / total; },
                     [&](const schedule::Constant &c) { return c.value; },
                     [&](const schedule::Step &s) { return e < s.k1 * total ? 0.0 : s.k2; },
                     [&](const schedule::PiecewiseLinear &p) {
                       if (e <= p.k1 * total) return (p.k2 / p.k1) * (e / total);
                       return p.k2 + ((1.0 - p.k2) / (1.0 - p.k1)) * (e / total - p.k1);
                     },
                 },
                 schedule);
  return clamp_unit(value);
}

AlphaSchedule parse_schedule(const std::string &text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = text.find(':', pos);
    parts.push_back(text.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos));
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  AlphaSchedule result;
  const std::string &kind = parts.front();
  if (kind == "linear" && parts.size() == 1) {
    result = schedule::Linear{};
  } else if (kind == "constant" && parts.size() == 2) {
    result = schedule::Constant{parse_double(parts[1], "constant value")};
  } else if (kind == "step" && parts.size() == 3) {
    result = schedule::Step{parse_double(parts[1], "step k1"), parse_double(parts[2], "step k2")};
  } else if (kind == "piecewise" && parts.size() == 3) {
    result = schedule::PiecewiseLinear{parse_double(parts[1], "piecewise k1"), parse_double(parts[2], "piecewise k2")};
  } else {
    throw ConfigError("unknown schedule '" + text +
                      "' (expected linear, constant:C, step:K1:K2 or piecewise:K1:K2)");
  }
  validate(result);
  return result;
}

std::string format_schedule(const AlphaSchedule &schedule) {
  return std::visit(Overloaded{
                        [](const schedule::Linear &) { return std::string("linear"); },
                        [](const schedule::Constant &c) { return "constant:" + format_double(c.value); },
                        [](const schedule::Step &s) {
                          return "step:" + format_double(s.k1) + ":" + format_double(s.k2);
                        },
                        [](const schedule::PiecewiseLinear &p) {
                          return "piecewise:" + format_double(p.k1) + ":" + format_double(p.k2);
                        },
                    },
                    schedule);
}

double rate(RateFunction g, double alpha) {
  switch (g) {
    case RateFunction::kIdentity:
      return clamp_unit(alpha);
  }
  return clamp_unit(alpha);
}

RateFunction parse_rate(const std::string &text) {
  if (text == "identity") return RateFunction::kIdentity;
  throw ConfigError("unknown rate function '" + text + "' (expected identity)");
}

std::string to_string(RateFunction) { return "identity"; }

}  // namespace fax
