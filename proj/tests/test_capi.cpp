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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fax/fax.h"

namespace fs = std::filesystem;

namespace {

fax_config *small_config() {
  fax_config *cfg = nullptr;
  REQUIRE(fax_config_create(FAX_EXPERIMENT_COLORED_MNIST, &cfg) == FAX_OK);
  const char *settings[][2] = {{"mnist_dir", FAX_DATA_DIR}, {"train_size", "64"}, {"test_size", "30"},
                               {"batch_size", "32"},         {"epochs", "2"},      {"architecture", "conv:3:5,relu,pool:2,flatten,dense:10"}};
  for (auto &kv : settings) REQUIRE(fax_config_set(cfg, kv[0], kv[1]) == FAX_OK);
  return cfg;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config handle") {
  fax_config *cfg = nullptr;
  REQUIRE(fax_config_create(FAX_EXPERIMENT_COMPOSITE_DEMO, &cfg) == FAX_OK);
  size_t needed = 0;
  REQUIRE(fax_config_format(cfg, nullptr, 0, &needed) == FAX_OK);
  std::string text(needed + 1, '\0');
  REQUIRE(fax_config_format(cfg, text.data(), text.size(), nullptr) == FAX_OK);
  CHECK(text.find("optimizer=adam\n") != std::string::npos);
  CHECK(text.find("experiment=composite_demo\n") != std::string::npos);

  CHECK(fax_config_set(cfg, "bogus", "1") == FAX_ERR_CONFIG);
  CHECK(std::string(fax_last_error()).find("bogus") != std::string::npos);
  CHECK(fax_config_set(cfg, "epochs", "0") == FAX_OK);
  CHECK(fax_config_validate(cfg) == FAX_ERR_CONFIG);
  CHECK(fax_config_load_file(cfg, "/nonexistent.cfg") == FAX_ERR_CONFIG);
  CHECK(fax_config_set(nullptr, "epochs", "1") == FAX_ERR_ARGUMENT);
  CHECK(fax_config_create(static_cast<fax_experiment>(9), &cfg) == FAX_ERR_CONFIG);
  fax_config_destroy(cfg);
  CHECK(std::strlen(fax_version()) > 0);
}

TEST_CASE("train, save, evaluate") {
  const fs::path dir = fs::temp_directory_path() / "fax_capi_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fax_config *cfg = small_config();

  int calls = 0;
  fax_run *run = nullptr;
  REQUIRE(fax_train(
              cfg, [](const fax_metrics_row *, void *user) { ++*static_cast<int *>(user); }, &calls, &run) == FAX_OK);
  CHECK(calls == 2);
  REQUIRE(fax_run_epochs(run) == 2);
  fax_metrics_row row{};
  REQUIRE(fax_run_row(run, 1, &row) == FAX_OK);
  CHECK(row.epoch == 1);
  CHECK(row.alpha == 0.5);
  CHECK(fax_run_row(run, 2, &row) == FAX_ERR_ARGUMENT);
  double best = -1, last = -1;
  REQUIRE(fax_run_summary(run, &best, &last) == FAX_OK);
  CHECK(best >= last);
  const std::string metrics = (dir / "m.csv").string();
  REQUIRE(fax_run_write_metrics(run, metrics.c_str()) == FAX_OK);
  CHECK(slurp(metrics).rfind("epoch,alpha,train_loss,test_acc_full,test_acc_focused,wall_ms\n", 0) == 0);

  const std::string model = (dir / "net.bin").string();
  REQUIRE(fax_network_save(fax_run_network(run), model.c_str()) == FAX_OK);
  fax_network *net = nullptr;
  REQUIRE(fax_network_load(model.c_str(), &net) == FAX_OK);

  char digest[32];
  const std::string data_dir = (dir / "data").string();
  REQUIRE(fax_synth_dataset(cfg, data_dir.c_str(), digest, sizeof digest) == FAX_OK);
  CHECK(std::strlen(digest) == 16);
  fax_dataset *data = nullptr;
  REQUIRE(fax_dataset_load(data_dir.c_str(), &data) == FAX_OK);
  CHECK(fax_dataset_count(data, 0) == 64);
  CHECK(fax_dataset_count(data, 1) == 30);
  char value[64];
  REQUIRE(fax_dataset_manifest(data, "digest", value, sizeof value) == FAX_OK);
  CHECK(std::string(value) == digest);
  CHECK(fax_dataset_manifest(data, "nope", value, sizeof value) == FAX_ERR_DATA);

  double acc = -1;
  REQUIRE(fax_evaluate(net, data, FAX_VARIANT_FULL, &acc) == FAX_OK);
  CHECK(acc == doctest::Approx(row.test_acc_full).epsilon(0.1).scale(1.0));
  REQUIRE(fax_evaluate(net, data, FAX_VARIANT_FOCUSED, &acc) == FAX_OK);
  CHECK(acc >= 0.0);

  const std::string ppm = (dir / "grid.ppm").string();
  REQUIRE(fax_dump_ppm(data, 1, FAX_VARIANT_FULL, 0, 12, 4, ppm.c_str()) == FAX_OK);
  CHECK(slurp(ppm).rfind("P6\n115 86\n255\n", 0) == 0);
  CHECK(fax_dump_ppm(data, 1, FAX_VARIANT_FULL, 25, 12, 4, ppm.c_str()) == FAX_ERR_CONFIG);

  CHECK(fax_dataset_load((dir / "missing").string().c_str(), &data) == FAX_ERR_DATA);
  CHECK(fax_network_load((dir / "missing.bin").string().c_str(), &net) == FAX_ERR_DATA);

  fax_dataset_destroy(data);
  fax_network_destroy(net);
  fax_run_destroy(run);
  fax_config_destroy(cfg);
  fs::remove_all(dir);
}

TEST_CASE("data errors surface as status codes") {
  fax_config *cfg = small_config();
  REQUIRE(fax_config_set(cfg, "mnist_dir", "/nonexistent") == FAX_OK);
  fax_run *run = nullptr;
  CHECK(fax_train(cfg, nullptr, nullptr, &run) == FAX_ERR_DATA);
  CHECK(std::string(fax_last_error()).find("/nonexistent") != std::string::npos);
  REQUIRE(fax_config_set(cfg, "mnist_dir", FAX_DATA_DIR) == FAX_OK);
  REQUIRE(fax_config_set(cfg, "learning_rate", "1e300") == FAX_OK);
  CHECK(fax_train(cfg, nullptr, nullptr, &run) == FAX_ERR_NUMERIC);
  fax_config_destroy(cfg);
}

TEST_CASE("policy comparison") {
  const fs::path dir = fs::temp_directory_path() / "fax_capi_cmp";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fax_config *cfg = small_config();
  const char *policies[] = {"linear", "constant:1", "blending@step:0.5:1"};
  fax_comparison *cmp = nullptr;
  REQUIRE(fax_compare_policies(cfg, policies, 3, &cmp) == FAX_OK);
  CHECK(fax_comparison_size(cmp) == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(fax_comparison_status(cmp, i) == FAX_OK);
  const std::string csv = (dir / "cmp.csv").string();
  REQUIRE(fax_comparison_write_csv(cmp, csv.c_str()) == FAX_OK);
  const std::string text = slurp(csv);
  CHECK(text.rfind("policy,best_acc,avg_last10_acc\nlinear,", 0) == 0);
  REQUIRE(fax_comparison_write_metrics(cmp, (dir / "run").string().c_str()) == FAX_OK);
  CHECK(fs::exists(dir / "run2.csv"));
  fax_comparison_destroy(cmp);
  CHECK(fax_compare_policies(cfg, policies, 1, &cmp) == FAX_ERR_CONFIG);
  fax_config_destroy(cfg);
  fs::remove_all(dir);
}

TEST_CASE("schedule and lambda helpers") {
  double alpha = -1;
  REQUIRE(fax_alpha_at("piecewise:0.8:0.5", 225, 250, &alpha) == FAX_OK);
  CHECK(alpha == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(fax_alpha_at("linear", 5, 4, &alpha) == FAX_ERR_CONFIG);
  CHECK(fax_alpha_at(nullptr, 0, 4, &alpha) == FAX_ERR_ARGUMENT);
  CHECK(fax_lambda_prime(0.4, 0.5) == doctest::Approx(0.7).epsilon(1e-15));
}
