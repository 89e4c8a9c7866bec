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
#include "core/config.hpp"

#include <fstream>
#include <sstream>

#include "core/format.hpp"
#include "core/network.hpp"

namespace fax {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::kColoredMnist:
      return "colored_mnist";
    case Experiment::kAugmentDemo:
      return "augment_demo";
    case Experiment::kCompositeDemo:
      return "composite_demo";
  }
  return "colored_mnist";
}

Experiment parse_experiment(const std::string &text) {
  if (text == "colored_mnist") return Experiment::kColoredMnist;
  if (text == "augment_demo") return Experiment::kAugmentDemo;
  if (text == "composite_demo") return Experiment::kCompositeDemo;
  throw ConfigError("unknown experiment '" + text + "' (expected colored_mnist, augment_demo or composite_demo)");
}

void RunConfig::validate() const {
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (train_size == 0 || test_size == 0) throw ConfigError("train_size and test_size must be >= 1");
  if (jobs == 0) throw ConfigError("jobs must be >= 1");
  if (!(sigma2 >= 0.0)) throw ConfigError("sigma2 must be >= 0");
  fax::validate(schedule);
  optimizer.validate();
  if (!architecture.empty()) parse_architecture(architecture);
}

namespace {

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_bool(const std::string &value, const std::string &key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

std::size_t parse_size(const std::string &value, const std::string &key) {
  return static_cast<std::size_t>(parse_u64(value, key));
}

}  // namespace

void apply_setting(RunConfig &cfg, const std::string &key, const std::string &value) {
  if (key == "experiment") {
    cfg.experiment = parse_experiment(value);
  } else if (key == "mnist_dir") {
    cfg.mnist_dir = value;
  } else if (key == "dataset_dir") {
    cfg.dataset_dir = value;
  } else if (key == "sigma2") {
    cfg.sigma2 = parse_double(value, key);
  } else if (key == "train_size") {
    cfg.train_size = parse_size(value, key);
  } else if (key == "test_size") {
    cfg.test_size = parse_size(value, key);
  } else if (key == "palette_seed") {
    cfg.palette_seed = parse_u64(value, key);
  } else if (key == "data_seed") {
    cfg.data_seed = parse_u64(value, key);
  } else if (key == "strategy") {
    cfg.strategy = parse_strategy(value);
  } else if (key == "schedule") {
    cfg.schedule = parse_schedule(value);
  } else if (key == "rate") {
    cfg.rate = parse_rate(value);
  } else if (key == "augment") {
    cfg.augment = parse_augment_mode(value);
  } else if (key == "lambda") {
    cfg.lambda = parse_lambda_distribution(value);
  } else if (key == "architecture") {
    cfg.architecture = value;
  } else if (key == "optimizer") {
    cfg.optimizer.kind = parse_optimizer_kind(value);
  } else if (key == "learning_rate") {
    cfg.optimizer.learning_rate = parse_double(value, key);
  } else if (key == "momentum") {
    cfg.optimizer.momentum = parse_double(value, key);
  } else if (key == "beta1") {
    cfg.optimizer.beta1 = parse_double(value, key);
  } else if (key == "beta2") {
    cfg.optimizer.beta2 = parse_double(value, key);
  } else if (key == "epsilon") {
    cfg.optimizer.epsilon = parse_double(value, key);
  } else if (key == "weight_decay") {
    cfg.optimizer.weight_decay = parse_double(value, key);
  } else if (key == "epochs") {
    cfg.epochs = parse_size(value, key);
  } else if (key == "batch_size") {
    cfg.batch_size = parse_size(value, key);
  } else if (key == "seed") {
    cfg.seed = parse_u64(value, key);
  } else if (key == "metrics_out") {
    cfg.metrics_out = value;
  } else if (key == "summary_out") {
    cfg.summary_out = value;
  } else if (key == "model_out") {
    cfg.model_out = value;
  } else if (key == "summary_metric") {
    if (value == "full") {
      cfg.summary_metric = SummaryMetric::kFull;
    } else if (value == "focused") {
      cfg.summary_metric = SummaryMetric::kFocused;
    } else {
      throw ConfigError("invalid summary_metric '" + value + "' (expected full or focused)");
    }
  } else if (key == "wall_clock") {
    cfg.wall_clock = parse_bool(value, key);
  } else if (key == "jobs") {
    cfg.jobs = parse_size(value, key);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_config_text(RunConfig &cfg, const std::string &text, const std::string &origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError &e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_config_file(RunConfig &cfg, const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path);
}

std::string format_config(const RunConfig &cfg) {
  std::ostringstream out;
  out << "experiment=" << to_string(cfg.experiment) << '\n'
      << "mnist_dir=" << cfg.mnist_dir << '\n'
      << "dataset_dir=" << cfg.dataset_dir << '\n'
      << "sigma2=" << format_double(cfg.sigma2) << '\n'
      << "train_size=" << cfg.train_size << '\n'
      << "test_size=" << cfg.test_size << '\n'
      << "palette_seed=" << cfg.palette_seed << '\n'
      << "data_seed=" << cfg.data_seed << '\n'
      << "strategy=" << to_string(cfg.strategy) << '\n'
      << "schedule=" << format_schedule(cfg.schedule) << '\n'
      << "rate=" << to_string(cfg.rate) << '\n'
      << "augment=" << to_string(cfg.augment) << '\n'
      << "lambda=" << to_string(cfg.lambda) << '\n'
      << "architecture="
      << (cfg.architecture.empty() ? format_architecture(default_architecture()) : cfg.architecture) << '\n'
      << "optimizer=" << to_string(cfg.optimizer.kind) << '\n'
      << "learning_rate=" << format_double(cfg.optimizer.learning_rate) << '\n'
      << "momentum=" << format_double(cfg.optimizer.momentum) << '\n'
      << "beta1=" << format_double(cfg.optimizer.beta1) << '\n'
      << "beta2=" << format_double(cfg.optimizer.beta2) << '\n'
      << "epsilon=" << format_double(cfg.optimizer.epsilon) << '\n'
      << "weight_decay=" << format_double(cfg.optimizer.weight_decay) << '\n'
      << "epochs=" << cfg.epochs << '\n'
      << "batch_size=" << cfg.batch_size << '\n'
      << "seed=" << cfg.seed << '\n'
      << "summary_metric=" << (cfg.summary_metric == SummaryMetric::kFull ? "full" : "focused") << '\n'
      << "wall_clock=" << (cfg.wall_clock ? "true" : "false") << '\n';
  return out.str();
}

std::string config_digest(const RunConfig &cfg) {
  Fnv1a h;
  h.update(format_config(cfg));
  return h.hex();
}

RunConfig default_config(Experiment e) {
  RunConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::kColoredMnist:
      break;
    case Experiment::kAugmentDemo:
      cfg.strategy = Strategy::kMixingBatch;
      break;
    case Experiment::kCompositeDemo:
      cfg.strategy = Strategy::kOpacityBlend;
      cfg.optimizer.kind = OptimizerKind::kAdam;
      cfg.optimizer.learning_rate = 1e-4;
      cfg.optimizer.weight_decay = 1e-6;
      cfg.batch_size = 32;
      cfg.train_size = 2000;
      cfg.test_size = 500;
      cfg.epochs = 10;
      break;
  }
  return cfg;
}

}  // namespace fax
