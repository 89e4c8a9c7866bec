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
#include <CLI11.hpp>

#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fax/fax.h"

namespace {

constexpr const char *kRunKeys[] = {
    "experiment",   "mnist_dir",   "dataset_dir", "sigma2",        "train_size", "test_size",    "palette_seed",
    "data_seed",    "strategy",    "schedule",    "rate",          "augment",    "lambda",       "architecture",
    "optimizer",    "learning_rate", "momentum",  "beta1",         "beta2",      "epsilon",      "weight_decay",
    "epochs",       "batch_size",  "seed",        "metrics_out",   "summary_out", "model_out",   "summary_metric",
    "wall_clock",   "jobs",
};

int exit_code(fax_status s) {
  switch (s) {
    case FAX_OK:
      return 0;
    case FAX_ERR_CONFIG:
    case FAX_ERR_ARGUMENT:
      return 2;
    case FAX_ERR_DATA:
    case FAX_ERR_SHAPE:
      return 3;
    case FAX_ERR_NUMERIC:
      return 4;
    default:
      return 1;
  }
}

struct Failure {
  fax_status status;
};

void check(fax_status s) {
  if (s != FAX_OK) throw Failure{s};
}

std::string config_value(const fax_config *cfg, const std::string &key) {
  std::size_t needed = 0;
  check(fax_config_format(cfg, nullptr, 0, &needed));
  std::string text(needed + 1, '\0');
  check(fax_config_format(cfg, text.data(), text.size(), nullptr));
  const std::string prefix = "\n" + key + "=";
  text.insert(0, "\n");
  const auto pos = text.find(prefix);
  if (pos == std::string::npos) return {};
  const auto start = pos + prefix.size();
  return text.substr(start, text.find('\n', start) - start);
}

struct ConfigDeleter {
  void operator()(fax_config *c) const { fax_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<fax_config, ConfigDeleter>;

/// RunConfig flags shared by every subcommand.
struct RunFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option *> options;

  void attach(CLI::App *app) {
    app->add_option("--config", config_file, "key=value config file; flags override its values")
        ->check(CLI::ExistingFile);
    for (const char *key : kRunKeys) {
      std::string dashed = key;
      for (auto &ch : dashed) ch = ch == '_' ? '-' : ch;
      std::string names = "--" + dashed;
      if (dashed != key) names += ",--" + std::string(key);
      options[key] = app->add_option(names, values[key], std::string("run setting ") + key);
    }
  }

  bool given(const std::string &key) const { return options.at(key)->count() > 0; }

  ConfigPtr build() const {
    fax_config *raw = nullptr;
    check(fax_config_create(FAX_EXPERIMENT_COLORED_MNIST, &raw));
    ConfigPtr probe(raw);
    if (!config_file.empty()) check(fax_config_load_file(probe.get(), config_file.c_str()));
    if (given("experiment")) check(fax_config_set(probe.get(), "experiment", values.at("experiment").c_str()));
    const std::string name = config_value(probe.get(), "experiment");
    fax_experiment exp = FAX_EXPERIMENT_COLORED_MNIST;
    if (name == "augment_demo") exp = FAX_EXPERIMENT_AUGMENT_DEMO;
    if (name == "composite_demo") exp = FAX_EXPERIMENT_COMPOSITE_DEMO;

    check(fax_config_create(exp, &raw));
    ConfigPtr cfg(raw);
    if (!config_file.empty()) check(fax_config_load_file(cfg.get(), config_file.c_str()));
    for (const char *key : kRunKeys) {
      if (given(key)) check(fax_config_set(cfg.get(), key, values.at(key).c_str()));
    }
    check(fax_config_validate(cfg.get()));
    return cfg;
  }
};

void print_row(const fax_metrics_row *row, void *) {
  std::fprintf(stderr, "epoch %llu alpha %.4f loss %.5f full %.4f focused %.4f\n",
               static_cast<unsigned long long>(row->epoch), row->alpha, row->train_loss, row->test_acc_full,
               row->test_acc_focused);
}

fax_variant parse_variant(const std::string &v) { return v == "focused" ? FAX_VARIANT_FOCUSED : FAX_VARIANT_FULL; }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Feature-continuation training experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fax_version());

  RunFlags synth_flags, train_flags, eval_flags, cmp_flags, dump_flags;

  auto *synth = app.add_subcommand("synth-dataset", "Write the paired dataset container and manifest");
  std::string synth_out;
  synth->add_option("-o,--out", synth_out, "output directory")->required();
  synth_flags.attach(synth);

  auto *train = app.add_subcommand("train", "Train one configuration and emit per-epoch metrics");
  bool quiet = false;
  train->add_flag("-q,--quiet", quiet, "no per-epoch progress on stderr");
  train_flags.attach(train);

  auto *evaluate = app.add_subcommand("evaluate", "Accuracy of a saved model on a dataset container");
  std::string model_path, eval_variant = "both";
  evaluate->add_option("--model", model_path, "model file written by train --model-out")->required();
  evaluate->add_option("--variant", eval_variant, "full, focused or both")
      ->check(CLI::IsMember({"full", "focused", "both"}));
  eval_flags.attach(evaluate);

  auto *compare = app.add_subcommand("compare-policies", "Run several schedules on shared data");
  std::vector<std::string> policies;
  std::string cmp_out, cmp_metrics_prefix;
  compare->add_option("--policies", policies, "[strategy@]schedule, e.g. linear step:0.25:1 blending@linear")
      ->required()
      ->delimiter(',');
  compare->add_option("-o,--out", cmp_out, "comparison CSV path (stdout when omitted)");
  compare->add_option("--metrics-prefix", cmp_metrics_prefix, "write per-policy metrics to <prefix><index>.csv");
  cmp_flags.attach(compare);

  auto *dump = app.add_subcommand("dump-ppm", "Tile dataset images into a P6 PPM");
  std::string dump_out, dump_split = "train", dump_variant = "full";
  std::size_t dump_first = 0, dump_count = 16, dump_cols = 8;
  dump->add_option("-o,--out", dump_out, "output .ppm path")->required();
  dump->add_option("--split", dump_split, "train or test")->check(CLI::IsMember({"train", "test"}));
  dump->add_option("--variant", dump_variant, "full or focused")->check(CLI::IsMember({"full", "focused"}));
  dump->add_option("--first", dump_first, "index of the first image");
  dump->add_option("--count", dump_count, "number of images")->check(CLI::PositiveNumber);
  dump->add_option("--cols", dump_cols, "images per row")->check(CLI::PositiveNumber);
  dump_flags.attach(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      ConfigPtr cfg = synth_flags.build();
      char digest[64];
      check(fax_synth_dataset(cfg.get(), synth_out.c_str(), digest, sizeof digest));
      std::printf("digest=%s\n", digest);
    } else if (*train) {
      ConfigPtr cfg = train_flags.build();
      fax_run *run = nullptr;
      check(fax_train(cfg.get(), quiet ? nullptr : print_row, nullptr, &run));
      double best = 0, last10 = 0;
      fax_run_summary(run, &best, &last10);
      std::printf("best_acc=%.6f\navg_last10_acc=%.6f\n", best, last10);
      fax_run_destroy(run);
    } else if (*evaluate) {
      ConfigPtr cfg = eval_flags.build();
      const std::string dir = config_value(cfg.get(), "dataset_dir");
      if (dir.empty()) {
        std::fprintf(stderr, "error: evaluate needs --dataset-dir (a synth-dataset container)\n");
        return 2;
      }
      fax_network *net = nullptr;
      check(fax_network_load(model_path.c_str(), &net));
      fax_dataset *data = nullptr;
      const fax_status ds = fax_dataset_load(dir.c_str(), &data);
      if (ds != FAX_OK) {
        fax_network_destroy(net);
        throw Failure{ds};
      }
      fax_status st = FAX_OK;
      for (const char *v : {"full", "focused"}) {
        if (eval_variant != "both" && eval_variant != v) continue;
        double acc = 0;
        st = fax_evaluate(net, data, parse_variant(v), &acc);
        if (st != FAX_OK) break;
        std::printf("test_acc_%s=%.6f\n", v, acc);
      }
      fax_dataset_destroy(data);
      fax_network_destroy(net);
      check(st);
    } else if (*compare) {
      ConfigPtr cfg = cmp_flags.build();
      std::vector<const char *> list;
      for (const auto &p : policies) list.push_back(p.c_str());
      fax_comparison *cmp = nullptr;
      check(fax_compare_policies(cfg.get(), list.data(), list.size(), &cmp));
      const std::string out = cmp_out.empty() ? "/dev/stdout" : cmp_out;
      fax_status st = fax_comparison_write_csv(cmp, out.c_str());
      if (st == FAX_OK && !cmp_metrics_prefix.empty()) st = fax_comparison_write_metrics(cmp, cmp_metrics_prefix.c_str());
      fax_status worst = FAX_OK;
      for (std::size_t i = 0; i < fax_comparison_size(cmp); ++i) {
        const fax_status s = fax_comparison_status(cmp, i);
        if (s != FAX_OK) {
          std::fprintf(stderr, "error: %s\n", fax_last_error());
          if (worst == FAX_OK) worst = s;
        }
      }
      fax_comparison_destroy(cmp);
      check(st);
      if (worst != FAX_OK) return exit_code(worst);
    } else if (*dump) {
      ConfigPtr cfg = dump_flags.build();
      const std::string dir = config_value(cfg.get(), "dataset_dir");
      if (dir.empty()) {
        std::fprintf(stderr, "error: dump-ppm needs --dataset-dir (a synth-dataset container)\n");
        return 2;
      }
      fax_dataset *data = nullptr;
      check(fax_dataset_load(dir.c_str(), &data));
      const fax_status st = fax_dump_ppm(data, dump_split == "test", parse_variant(dump_variant), dump_first,
                                         dump_count, dump_cols, dump_out.c_str());
      fax_dataset_destroy(data);
      check(st);
    }
  } catch (const Failure &f) {
    std::fprintf(stderr, "error: %s\n", fax_last_error());
    return exit_code(f.status);
  }
  return 0;
}
