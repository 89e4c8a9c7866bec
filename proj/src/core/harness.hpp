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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/container.hpp"
#include "core/network.hpp"
#include "core/pipeline.hpp"

namespace fax {

struct MetricsRecord {
  std::size_t epoch = 0;
  double alpha = 0.0;
  double train_loss = 0.0;
  double test_acc_full = 0.0;
  double test_acc_focused = 0.0;
  std::uint64_t wall_ms = 0;

  bool operator==(const MetricsRecord &) const = default;
};

inline constexpr const char *kMetricsHeader = "epoch,alpha,train_loss,test_acc_full,test_acc_focused,wall_ms";
inline constexpr const char *kComparisonHeader = "policy,best_acc,avg_last10_acc";

struct Summary {
  double best_acc = 0.0;
  double avg_last10_acc = 0.0;
  std::string config_digest;
};

/// Best and mean-of-last-10 (or all, if fewer) of the chosen accuracy column.
Summary summarize(const std::vector<MetricsRecord> &rows, SummaryMetric metric, const std::string &digest = "");

std::string format_metrics_csv(const std::vector<MetricsRecord> &rows);
std::vector<MetricsRecord> parse_metrics_csv(const std::string &text);
std::string format_summary(const Summary &summary);

/// Train/test pairs for one experiment.
struct ExperimentData {
  PairedDataset train;
  PairedDataset test;
  Manifest manifest;
};

/// Synthesizes (or loads, when dataset_dir is set) the experiment's data.
ExperimentData prepare_data(const RunConfig &cfg);

/// Fraction of argmax-correct predictions against x1 (kFull) or x0
/// (kFocused). Ties go to the lowest class index.
double evaluate(const NetworkState &net, const PairedDataset &test, Source variant);

struct RunResult {
  std::vector<MetricsRecord> rows;
  Summary summary;
  NetworkState net;
  /// stream_digest of every epoch's training stream, in epoch order.
  std::vector<std::string> stream_digests;
};

using ProgressFn = std::function<void(const MetricsRecord &)>;

/// Runs `cfg.epochs` epochs on already prepared data. Writes metrics_out,
/// summary_out and model_out when set.
RunResult run(const RunConfig &cfg, const ExperimentData &data, const ProgressFn &progress = {});
RunResult run(const RunConfig &cfg, const ProgressFn &progress = {});

struct PolicyOutcome {
  std::string policy;
  std::optional<RunResult> result;
  std::string error;
  ErrorKind error_kind = ErrorKind::kInternal;
};

/// Runs `base` once per policy on shared data. A policy is a schedule
/// ("linear", "step:0.25:1") optionally prefixed by a strategy
/// ("blending@linear"). Runs are independent and use
/// up to cfg.jobs threads. Failed runs keep their error text and are
/// reported as NA in the CSV.
std::vector<PolicyOutcome> compare_policies(const RunConfig &base, const std::vector<std::string> &policies);
std::string format_comparison_csv(const std::vector<PolicyOutcome> &outcomes);

/// Writes the experiment's pairs as a container with palette, sigma2, seeds
/// and counts in the manifest.
Manifest synth_dataset(const RunConfig &cfg, const std::string &out_dir);

}  // namespace fax
