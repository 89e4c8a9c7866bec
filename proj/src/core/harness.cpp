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
#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/augment.hpp"
#include "core/format.hpp"
#include "core/idx.hpp"
#include "core/optimizer.hpp"
#include "core/synthesis.hpp"

namespace fax {

Summary summarize(const std::vector<MetricsRecord> &rows, SummaryMetric metric, const std::string &digest) {
  Summary s;
  s.config_digest = digest;
  if (rows.empty()) return s;
  const auto pick = [metric](const MetricsRecord &r) {
    return metric == SummaryMetric::kFull ? r.test_acc_full : r.test_acc_focused;
  };
  s.best_acc = pick(rows.front());
  for (const auto &r : rows) s.best_acc = std::max(s.best_acc, pick(r));
  const std::size_t tail = std::min<std::size_t>(10, rows.size());
  double sum = 0.0;
  for (std::size_t i = rows.size() - tail; i < rows.size(); ++i) sum += pick(rows[i]);
  s.avg_last10_acc = sum / static_cast<double>(tail);
  return s;
}

std::string format_metrics_csv(const std::vector<MetricsRecord> &rows) {
  std::string out = std::string(kMetricsHeader) + "\n";
  for (const auto &r : rows) {
    out += std::to_string(r.epoch) + "," + format_double(r.alpha) + "," + format_double(r.train_loss) + "," +
           format_double(r.test_acc_full) + "," + format_double(r.test_acc_focused) + "," + std::to_string(r.wall_ms) +
           "\n";
  }
  return out;
}

std::vector<MetricsRecord> parse_metrics_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) throw DataError("metrics CSV has an unexpected header");
  std::vector<MetricsRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw DataError("metrics CSV row has " + std::to_string(f.size()) + " fields: " + line);
    try {
      rows.push_back(MetricsRecord{parse_u64(f[0], "epoch"), parse_double(f[1], "alpha"),
                                   parse_double(f[2], "train_loss"), parse_double(f[3], "test_acc_full"),
                                   parse_double(f[4], "test_acc_focused"), parse_u64(f[5], "wall_ms")});
    } catch (const ConfigError &e) {
      throw DataError(std::string("metrics CSV: ") + e.what());
    }
  }
  return rows;
}

std::string format_summary(const Summary &s) {
  return "best_acc=" + format_double(s.best_acc) + "\navg_last10_acc=" + format_double(s.avg_last10_acc) +
         "\nconfig_digest=" + s.config_digest + "\n";
}

namespace {

std::string find_idx(const std::string &dir, const std::string &stem) {
  for (const char *suffix : {"", ".gz"}) {
    const auto path = std::filesystem::path(dir) / (stem + suffix);
    if (std::filesystem::exists(path)) return path.string();
  }
  throw DataError("no " + stem + "[.gz] in " + dir);
}

void note_palette(Manifest &m, const Palette &p) {
  for (std::size_t i = 0; i < p.means.size(); ++i) {
    const auto &c = p.means[i];
    m.set("palette_mean_" + std::to_string(i), format_double(c[0]) + " " + format_double(c[1]) + " " +
                                                    format_double(c[2]));
  }
  const Rgb mu = p.mean_color();
  m.set("palette_mean_color", format_double(mu[0]) + " " + format_double(mu[1]) + " " + format_double(mu[2]));
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path);
}

constexpr std::uint64_t kCompositeTestSalt = 0x7465737473657421ULL;

}  // namespace

ExperimentData prepare_data(const RunConfig &cfg) {
  ExperimentData data;
  if (!cfg.dataset_dir.empty()) {
    Container c = read_container(cfg.dataset_dir);
    data.train = std::move(c.train);
    data.test = std::move(c.test);
    data.manifest = std::move(c.manifest);
    return data;
  }
  Manifest &m = data.manifest;
  m.set("experiment", to_string(cfg.experiment));
  m.set("data_seed", std::to_string(cfg.data_seed));
  if (cfg.experiment == Experiment::kCompositeDemo) {
    data.train = make_composite_set(cfg.train_size, cfg.data_seed).pairs;
    data.test = make_composite_set(cfg.test_size, cfg.data_seed ^ kCompositeTestSalt).pairs;
  } else {
    const RawMnist train_raw =
        load_idx(find_idx(cfg.mnist_dir, "train-images-idx3-ubyte"), find_idx(cfg.mnist_dir, "train-labels-idx1-ubyte"));
    const RawMnist test_raw =
        load_idx(find_idx(cfg.mnist_dir, "t10k-images-idx3-ubyte"), find_idx(cfg.mnist_dir, "t10k-labels-idx1-ubyte"));
    const Palette palette = make_palette(cfg.palette_seed, cfg.sigma2);
    ColoredMnist colored =
        build_colored_mnist(train_raw, test_raw, palette, cfg.train_size, cfg.test_size, cfg.data_seed);
    data.train = std::move(colored.train.pairs);
    data.test = std::move(colored.test.pairs);
    m.set("sigma2", format_double(cfg.sigma2));
    m.set("palette_seed", std::to_string(cfg.palette_seed));
    note_palette(m, palette);
  }
  m.set("defaults", "desk-scale defaults chosen by this toolkit");
  return data;
}

double evaluate(const NetworkState &net, const PairedDataset &test, Source variant) {
  if (test.empty()) throw ConfigError("cannot evaluate on an empty test set");
  constexpr std::size_t kChunk = 256;
  std::size_t correct = 0;
  std::vector<ImageTensor> chunk;
  for (std::size_t begin = 0; begin < test.size(); begin += kChunk) {
    const std::size_t end = std::min(begin + kChunk, test.size());
    chunk.clear();
    for (std::size_t i = begin; i < end; ++i) chunk.push_back(variant == Source::kFull ? test[i].x1 : test[i].x0);
    const Matrix logits = forward(net, chunk);
    for (std::size_t i = begin; i < end; ++i) {
      Eigen::Index best = 0;
      const auto row = logits.row(static_cast<Eigen::Index>(i - begin));
      for (Eigen::Index k = 1; k < row.size(); ++k) {
        if (row[k] > row[best]) best = k;
      }
      if (static_cast<std::size_t>(best) == test[i].label) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

RunResult run(const RunConfig &cfg, const ExperimentData &data, const ProgressFn &progress) {
  cfg.validate();
  if (data.train.empty()) throw ConfigError("training set is empty");
  const auto layers = cfg.architecture.empty() ? default_architecture() : parse_architecture(cfg.architecture);

  RunResult result;
  result.net = init_network(layers, data.train.shape(), cfg.seed);
  const bool augmenting = cfg.experiment == Experiment::kAugmentDemo;
  const AugmentConfig augment{cfg.augment, cfg.rate, cfg.lambda, cfg.seed};

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    const double alpha = alpha_at(cfg.schedule, epoch, cfg.epochs);
    StreamConfig stream_cfg{cfg.strategy, alpha, cfg.rate, cfg.seed, cfg.batch_size};
    if (augmenting) {
      // the augmentation gate does the mixing; the base stream is the full data
      stream_cfg.strategy = Strategy::kBlending;
      stream_cfg.alpha = 1.0;
    }
    const EpochStream stream = epoch_stream(data.train, stream_cfg, epoch);
    Fnv1a stream_hash;

    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t b = 0; b < stream.num_batches(); ++b) {
      Batch batch = stream.batch(b);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        stream_hash.update(batch.images[i].values().data(), batch.images[i].values().size_bytes());
        stream_hash.update(&batch.labels[i], 1);
      }
      std::vector<ImageTensor> images;
      std::vector<SoftTarget> targets;
      if (augmenting) {
        MixedBatch mixed = augment_batch(batch, alpha, augment, epoch, b);
        images = std::move(mixed.images);
        targets = std::move(mixed.targets);
      } else {
        images = std::move(batch.images);
        for (auto y : batch.labels) targets.push_back(SoftTarget::hard(y));
      }
      LossAndGrads lg;
      try {
        lg = loss_and_grads(result.net, images, targets);
      } catch (const NumericError &e) {
        throw NumericError("epoch " + std::to_string(epoch) + ", batch " + std::to_string(b) + ": " + e.what(),
                           e.item());
      }
      optimizer_step(result.net, lg.grads, cfg.optimizer);
      loss_sum += lg.loss * static_cast<double>(images.size());
      seen += images.size();
    }
    result.stream_digests.push_back(stream_hash.hex());

    MetricsRecord row;
    row.epoch = epoch;
    row.alpha = alpha;
    row.train_loss = loss_sum / static_cast<double>(seen);
    row.test_acc_full = evaluate(result.net, data.test, Source::kFull);
    row.test_acc_focused = evaluate(result.net, data.test, Source::kFocused);
    if (cfg.wall_clock) {
      row.wall_ms = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                                   std::chrono::steady_clock::now() - started)
                                                   .count());
    }
    result.rows.push_back(row);
    if (progress) progress(row);
  }

  result.summary = summarize(result.rows, cfg.summary_metric, config_digest(cfg));
  if (!cfg.metrics_out.empty()) write_text(cfg.metrics_out, format_metrics_csv(result.rows));
  if (!cfg.summary_out.empty()) write_text(cfg.summary_out, format_summary(result.summary));
  if (!cfg.model_out.empty()) save_network(result.net, cfg.model_out);
  return result;
}

RunResult run(const RunConfig &cfg, const ProgressFn &progress) {
  cfg.validate();
  return run(cfg, prepare_data(cfg), progress);
}

std::vector<PolicyOutcome> compare_policies(const RunConfig &base, const std::vector<std::string> &policies) {
  if (policies.size() < 2) throw ConfigError("compare_policies needs at least two policies");
  base.validate();
  std::vector<RunConfig> configs;
  for (const auto &p : policies) {
    RunConfig cfg = base;
    const auto at = p.find('@');
    if (at == std::string::npos) {
      cfg.schedule = parse_schedule(p);
    } else {
      cfg.strategy = parse_strategy(p.substr(0, at));
      cfg.schedule = parse_schedule(p.substr(at + 1));
    }
    cfg.metrics_out.clear();
    cfg.summary_out.clear();
    cfg.model_out.clear();
    configs.push_back(cfg);
  }
  const ExperimentData data = prepare_data(base);

  std::vector<PolicyOutcome> outcomes(policies.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      outcomes[i].policy = policies[i];
      try {
        outcomes[i].result = run(configs[i], data);
      } catch (const Error &e) {
        outcomes[i].error = e.what();
        outcomes[i].error_kind = e.kind();
      } catch (const std::exception &e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const std::size_t threads = std::min(base.jobs, configs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return outcomes;
}

std::string format_comparison_csv(const std::vector<PolicyOutcome> &outcomes) {
  std::string out = std::string(kComparisonHeader) + "\n";
  for (const auto &o : outcomes) {
    if (o.result) {
      out += o.policy + "," + format_double(o.result->summary.best_acc) + "," +
             format_double(o.result->summary.avg_last10_acc) + "\n";
    } else {
      out += o.policy + ",NA,NA\n";
    }
  }
  return out;
}

Manifest synth_dataset(const RunConfig &cfg, const std::string &out_dir) {
  RunConfig synth = cfg;
  synth.dataset_dir.clear();
  synth.validate();
  ExperimentData data = prepare_data(synth);
  data.manifest.set("config_digest", config_digest(synth));
  return write_container(out_dir, data.train, data.test, data.manifest);
}

}  // namespace fax
