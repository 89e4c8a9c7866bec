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
#include "fax/fax.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <string>

#include "core/augment.hpp"
#include "core/config.hpp"
#include "core/container.hpp"
#include "core/format.hpp"
#include "core/harness.hpp"
#include "core/ppm.hpp"
#include "core/schedule.hpp"

struct fax_config {
  fax::RunConfig cfg;
};

struct fax_network {
  fax::NetworkState net;
};

struct fax_run {
  fax::RunResult result;
  fax_network network;
};

struct fax_dataset {
  fax::Container container;
};

struct fax_comparison {
  std::vector<fax::PolicyOutcome> outcomes;
};

namespace {

thread_local std::string g_last_error;

fax_status fail(fax_status status, const std::string &message) {
  g_last_error = message;
  return status;
}

/// Runs `body`, translating exceptions into status codes.
template <class F>
fax_status guarded(F &&body) {
  try {
    g_last_error.clear();
    body();
    return FAX_OK;
  } catch (const fax::Error &e) {
    return fail(static_cast<fax_status>(e.kind()), e.what());
  } catch (const std::bad_alloc &) {
    return fail(FAX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(FAX_ERR_INTERNAL, e.what());
  }
}

#define FAX_REQUIRE(cond, what) \
  if (!(cond)) return fail(FAX_ERR_ARGUMENT, what)

fax_metrics_row to_c(const fax::MetricsRecord &r) {
  return fax_metrics_row{r.epoch, r.alpha, r.train_loss, r.test_acc_full, r.test_acc_focused, r.wall_ms};
}

fax::Source to_source(fax_variant v) { return v == FAX_VARIANT_FOCUSED ? fax::Source::kFocused : fax::Source::kFull; }

void write_text(const std::string &path, const std::string &text) {
  FILE *f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw fax::DataError("cannot open " + path + " for writing");
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) throw fax::DataError("failed writing " + path);
}

}  // namespace

extern "C" {

const char *fax_version(void) { return "0.1.0"; }

const char *fax_last_error(void) { return g_last_error.c_str(); }

fax_status fax_config_create(fax_experiment experiment, fax_config **out) {
  FAX_REQUIRE(out != nullptr, "out is null");
  return guarded([&] {
    fax::Experiment e = fax::Experiment::kColoredMnist;
    switch (experiment) {
      case FAX_EXPERIMENT_COLORED_MNIST:
        break;
      case FAX_EXPERIMENT_AUGMENT_DEMO:
        e = fax::Experiment::kAugmentDemo;
        break;
      case FAX_EXPERIMENT_COMPOSITE_DEMO:
        e = fax::Experiment::kCompositeDemo;
        break;
      default:
        throw fax::ConfigError("unknown experiment id " + std::to_string(static_cast<int>(experiment)));
    }
    *out = new fax_config{fax::default_config(e)};
  });
}

void fax_config_destroy(fax_config *cfg) { delete cfg; }

fax_status fax_config_load_file(fax_config *cfg, const char *path) {
  FAX_REQUIRE(cfg != nullptr && path != nullptr, "config and path must be non-null");
  return guarded([&] { fax::load_config_file(cfg->cfg, path); });
}

fax_status fax_config_set(fax_config *cfg, const char *key, const char *value) {
  FAX_REQUIRE(cfg != nullptr && key != nullptr && value != nullptr, "config, key and value must be non-null");
  return guarded([&] { fax::apply_setting(cfg->cfg, key, value); });
}

fax_status fax_config_validate(const fax_config *cfg) {
  FAX_REQUIRE(cfg != nullptr, "config is null");
  return guarded([&] { cfg->cfg.validate(); });
}

fax_status fax_config_format(const fax_config *cfg, char *buf, size_t size, size_t *needed) {
  FAX_REQUIRE(cfg != nullptr, "config is null");
  return guarded([&] {
    const std::string text = fax::format_config(cfg->cfg);
    if (needed != nullptr) *needed = text.size();
    if (buf != nullptr && size > 0) {
      const size_t n = std::min(size - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

fax_status fax_train(const fax_config *cfg, fax_progress_fn progress, void *user, fax_run **out) {
  FAX_REQUIRE(cfg != nullptr && out != nullptr, "config and out must be non-null");
  return guarded([&] {
    fax::ProgressFn fn;
    if (progress != nullptr) {
      fn = [progress, user](const fax::MetricsRecord &r) {
        const fax_metrics_row row = to_c(r);
        progress(&row, user);
      };
    }
    auto *run = new fax_run{fax::run(cfg->cfg, fn), {}};
    run->network.net = run->result.net;
    *out = run;
  });
}

void fax_run_destroy(fax_run *run) { delete run; }

size_t fax_run_epochs(const fax_run *run) { return run == nullptr ? 0 : run->result.rows.size(); }

fax_status fax_run_row(const fax_run *run, size_t epoch, fax_metrics_row *out) {
  FAX_REQUIRE(run != nullptr && out != nullptr, "run and out must be non-null");
  FAX_REQUIRE(epoch < run->result.rows.size(), "epoch out of range");
  *out = to_c(run->result.rows[epoch]);
  return FAX_OK;
}

fax_status fax_run_summary(const fax_run *run, double *best_acc, double *avg_last10_acc) {
  FAX_REQUIRE(run != nullptr, "run is null");
  if (best_acc != nullptr) *best_acc = run->result.summary.best_acc;
  if (avg_last10_acc != nullptr) *avg_last10_acc = run->result.summary.avg_last10_acc;
  return FAX_OK;
}

fax_status fax_run_write_metrics(const fax_run *run, const char *path) {
  FAX_REQUIRE(run != nullptr && path != nullptr, "run and path must be non-null");
  return guarded([&] { write_text(path, fax::format_metrics_csv(run->result.rows)); });
}

const fax_network *fax_run_network(const fax_run *run) { return run == nullptr ? nullptr : &run->network; }

fax_status fax_network_load(const char *path, fax_network **out) {
  FAX_REQUIRE(path != nullptr && out != nullptr, "path and out must be non-null");
  return guarded([&] { *out = new fax_network{fax::load_network(path)}; });
}

fax_status fax_network_save(const fax_network *net, const char *path) {
  FAX_REQUIRE(net != nullptr && path != nullptr, "network and path must be non-null");
  return guarded([&] { fax::save_network(net->net, path); });
}

void fax_network_destroy(fax_network *net) { delete net; }

fax_status fax_synth_dataset(const fax_config *cfg, const char *dir, char *digest, size_t digest_size) {
  FAX_REQUIRE(cfg != nullptr && dir != nullptr, "config and dir must be non-null");
  return guarded([&] {
    const fax::Manifest m = fax::synth_dataset(cfg->cfg, dir);
    if (digest != nullptr && digest_size > 0) {
      const std::string &d = m.get("digest");
      const size_t n = std::min(digest_size - 1, d.size());
      std::memcpy(digest, d.data(), n);
      digest[n] = '\0';
    }
  });
}

fax_status fax_dataset_load(const char *dir, fax_dataset **out) {
  FAX_REQUIRE(dir != nullptr && out != nullptr, "dir and out must be non-null");
  return guarded([&] { *out = new fax_dataset{fax::read_container(dir)}; });
}

void fax_dataset_destroy(fax_dataset *data) { delete data; }

size_t fax_dataset_count(const fax_dataset *data, int test) {
  if (data == nullptr) return 0;
  return test ? data->container.test.size() : data->container.train.size();
}

fax_status fax_dataset_manifest(const fax_dataset *data, const char *key, char *buf, size_t size) {
  FAX_REQUIRE(data != nullptr && key != nullptr && buf != nullptr && size > 0, "invalid manifest query");
  return guarded([&] {
    const std::string &v = data->container.manifest.get(key);
    if (v.size() + 1 > size) throw fax::ConfigError("buffer too small for manifest value of " + std::string(key));
    std::memcpy(buf, v.c_str(), v.size() + 1);
  });
}

fax_status fax_evaluate(const fax_network *net, const fax_dataset *data, fax_variant variant, double *accuracy) {
  FAX_REQUIRE(net != nullptr && data != nullptr && accuracy != nullptr, "network, dataset and accuracy must be non-null");
  return guarded([&] { *accuracy = fax::evaluate(net->net, data->container.test, to_source(variant)); });
}

fax_status fax_dump_ppm(const fax_dataset *data, int test, fax_variant variant, size_t first, size_t count,
                        size_t cols, const char *path) {
  FAX_REQUIRE(data != nullptr && path != nullptr, "dataset and path must be non-null");
  return guarded([&] {
    const fax::PairedDataset &split = test ? data->container.test : data->container.train;
    if (count == 0 || first + count > split.size()) {
      throw fax::ConfigError("requested images [" + std::to_string(first) + ", " + std::to_string(first + count) +
                             ") but the split holds " + std::to_string(split.size()));
    }
    std::vector<fax::ImageTensor> images;
    for (size_t i = first; i < first + count; ++i) {
      images.push_back(variant == FAX_VARIANT_FOCUSED ? split[i].x0 : split[i].x1);
    }
    fax::write_ppm(path, fax::tile_images(images, cols));
  });
}

fax_status fax_compare_policies(const fax_config *cfg, const char *const *policies, size_t count,
                                fax_comparison **out) {
  FAX_REQUIRE(cfg != nullptr && out != nullptr && (policies != nullptr || count == 0), "invalid comparison request");
  return guarded([&] {
    std::vector<std::string> list;
    for (size_t i = 0; i < count; ++i) {
      if (policies[i] == nullptr) throw fax::ConfigError("policy " + std::to_string(i) + " is null");
      list.emplace_back(policies[i]);
    }
    *out = new fax_comparison{fax::compare_policies(cfg->cfg, list)};
  });
}

void fax_comparison_destroy(fax_comparison *cmp) { delete cmp; }

size_t fax_comparison_size(const fax_comparison *cmp) { return cmp == nullptr ? 0 : cmp->outcomes.size(); }

fax_status fax_comparison_status(const fax_comparison *cmp, size_t index) {
  FAX_REQUIRE(cmp != nullptr && index < cmp->outcomes.size(), "comparison index out of range");
  const auto &o = cmp->outcomes[index];
  if (o.result) return FAX_OK;
  return fail(static_cast<fax_status>(o.error_kind), o.policy + ": " + o.error);
}

fax_status fax_comparison_write_csv(const fax_comparison *cmp, const char *path) {
  FAX_REQUIRE(cmp != nullptr && path != nullptr, "comparison and path must be non-null");
  return guarded([&] { write_text(path, fax::format_comparison_csv(cmp->outcomes)); });
}

fax_status fax_comparison_write_metrics(const fax_comparison *cmp, const char *prefix) {
  FAX_REQUIRE(cmp != nullptr && prefix != nullptr, "comparison and prefix must be non-null");
  return guarded([&] {
    for (size_t i = 0; i < cmp->outcomes.size(); ++i) {
      const auto &o = cmp->outcomes[i];
      if (o.result) write_text(std::string(prefix) + std::to_string(i) + ".csv", fax::format_metrics_csv(o.result->rows));
    }
  });
}

fax_status fax_alpha_at(const char *schedule, uint64_t epoch, uint64_t total_epochs, double *alpha) {
  FAX_REQUIRE(schedule != nullptr && alpha != nullptr, "schedule and alpha must be non-null");
  return guarded([&] { *alpha = fax::alpha_at(fax::parse_schedule(schedule), epoch, total_epochs); });
}

double fax_lambda_prime(double lambda, double alpha) { return fax::fax_lambda(lambda, alpha); }

}  // extern "C"
