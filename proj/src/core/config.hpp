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
#include <string>
#include <vector>

#include "core/augment.hpp"
#include "core/optimizer.hpp"
#include "core/pipeline.hpp"
#include "core/schedule.hpp"

namespace fax {

enum class Experiment { kColoredMnist, kAugmentDemo, kCompositeDemo };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string &text);

/// Which test accuracy feeds best/avg-last-10 summaries.
enum class SummaryMetric { kFull, kFocused };

/// Everything a run depends on. Text form is UTF-8 `key=value` lines with
/// `#` comments; keys are the field names below.
struct RunConfig {
  Experiment experiment = Experiment::kColoredMnist;

  // data
  std::string mnist_dir = "data/mnist-5k";
  std::string dataset_dir;  // load a synth-dataset container instead of synthesizing
  double sigma2 = 0.02;
  std::size_t train_size = 4000;
  std::size_t test_size = 1000;
  std::uint64_t palette_seed = 0;
  std::uint64_t data_seed = 1;

  // continuation
  Strategy strategy = Strategy::kMixingSample;
  AlphaSchedule schedule = schedule::Linear{};
  RateFunction rate = RateFunction::kIdentity;

  // augmentation (augment_demo only)
  AugmentMode augment = AugmentMode::kMixup;
  LambdaDistribution lambda;

  // model and optimisation
  std::string architecture;  // empty: default_architecture()
  OptimizerConfig optimizer;
  std::size_t epochs = 30;
  std::size_t batch_size = 64;
  std::uint64_t seed = 1;

  // outputs
  std::string metrics_out;
  std::string summary_out;
  std::string model_out;
  SummaryMetric summary_metric = SummaryMetric::kFull;
  bool wall_clock = false;  // real wall_ms (breaks byte-identical CSVs)
  std::size_t jobs = 1;     // concurrent runs in compare_policies

  void validate() const;
};

/// Sets one field from text. Throws ConfigError for unknown keys or values.
void apply_setting(RunConfig &cfg, const std::string &key, const std::string &value);

/// Applies every `key=value` line of `text`.
void apply_config_text(RunConfig &cfg, const std::string &text, const std::string &origin = "config");
void load_config_file(RunConfig &cfg, const std::string &path);

/// Canonical text of every field, one `key=value` per line, in fixed order.
std::string format_config(const RunConfig &cfg);
std::string config_digest(const RunConfig &cfg);

/// Desk-scale defaults of the experiment family, applied before file/flag
/// overrides.
RunConfig default_config(Experiment e);

}  // namespace fax
