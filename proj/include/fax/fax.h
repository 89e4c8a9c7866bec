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
#ifndef FAX_FAX_H_
#define FAX_FAX_H_

/*
 * C interface to the fax feature-continuation toolkit.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns a fax_status; on failure fax_last_error() describes
 * the problem (the message is thread-local and valid until the next call on
 * the same thread).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FAX_BUILDING_LIBRARY)
#define FAX_API __declspec(dllexport)
#else
#define FAX_API __declspec(dllimport)
#endif
#else
#define FAX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the non-zero values double as CLI exit codes. */
typedef enum fax_status {
  FAX_OK = 0,
  FAX_ERR_INTERNAL = 1,
  FAX_ERR_CONFIG = 2,
  FAX_ERR_DATA = 3,
  FAX_ERR_NUMERIC = 4,
  FAX_ERR_SHAPE = 5,
  FAX_ERR_ARGUMENT = 6
} fax_status;

typedef enum fax_experiment {
  FAX_EXPERIMENT_COLORED_MNIST = 0,
  FAX_EXPERIMENT_AUGMENT_DEMO = 1,
  FAX_EXPERIMENT_COMPOSITE_DEMO = 2
} fax_experiment;

/* Which member of a pair to read: x1 (full features) or x0 (focused). */
typedef enum fax_variant { FAX_VARIANT_FULL = 0, FAX_VARIANT_FOCUSED = 1 } fax_variant;

typedef struct fax_config fax_config;
typedef struct fax_run fax_run;
typedef struct fax_network fax_network;
typedef struct fax_dataset fax_dataset;
typedef struct fax_comparison fax_comparison;

typedef struct fax_metrics_row {
  uint64_t epoch;
  double alpha;
  double train_loss;
  double test_acc_full;
  double test_acc_focused;
  uint64_t wall_ms;
} fax_metrics_row;

typedef void (*fax_progress_fn)(const fax_metrics_row *row, void *user);

FAX_API const char *fax_version(void);
FAX_API const char *fax_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* New configuration holding the desk-scale defaults of `experiment`. */
FAX_API fax_status fax_config_create(fax_experiment experiment, fax_config **out);
FAX_API void fax_config_destroy(fax_config *cfg);
/* Applies `key=value` lines (with '#' comments) from a UTF-8 file. */
FAX_API fax_status fax_config_load_file(fax_config *cfg, const char *path);
FAX_API fax_status fax_config_set(fax_config *cfg, const char *key, const char *value);
FAX_API fax_status fax_config_validate(const fax_config *cfg);
/* Canonical key=value text. Writes at most `size` bytes (NUL included) and
 * stores the full length, excluding NUL, in *needed when non-null. */
FAX_API fax_status fax_config_format(const fax_config *cfg, char *buf, size_t size, size_t *needed);

/* ---- training ----------------------------------------------------------- */

/* Runs the configured experiment. Output files named in the config
 * (metrics_out, summary_out, model_out) are written. */
FAX_API fax_status fax_train(const fax_config *cfg, fax_progress_fn progress, void *user, fax_run **out);
FAX_API void fax_run_destroy(fax_run *run);
FAX_API size_t fax_run_epochs(const fax_run *run);
FAX_API fax_status fax_run_row(const fax_run *run, size_t epoch, fax_metrics_row *out);
FAX_API fax_status fax_run_summary(const fax_run *run, double *best_acc, double *avg_last10_acc);
FAX_API fax_status fax_run_write_metrics(const fax_run *run, const char *path);
/* Borrowed view of the trained network; owned by `run`. */
FAX_API const fax_network *fax_run_network(const fax_run *run);

/* ---- networks and datasets ---------------------------------------------- */

FAX_API fax_status fax_network_load(const char *path, fax_network **out);
FAX_API fax_status fax_network_save(const fax_network *net, const char *path);
FAX_API void fax_network_destroy(fax_network *net);

/* Writes the configured experiment's pairs to `dir` as a container
 * (train.bin, test.bin, manifest.txt). The content digest is copied into
 * `digest` (17 bytes suffice) when non-null. */
FAX_API fax_status fax_synth_dataset(const fax_config *cfg, const char *dir, char *digest, size_t digest_size);
FAX_API fax_status fax_dataset_load(const char *dir, fax_dataset **out);
FAX_API void fax_dataset_destroy(fax_dataset *data);
/* `test` selects the test split (non-zero) or the training split. */
FAX_API size_t fax_dataset_count(const fax_dataset *data, int test);
FAX_API fax_status fax_dataset_manifest(const fax_dataset *data, const char *key, char *buf, size_t size);

/* Accuracy of `net` on the test split of `data`. */
FAX_API fax_status fax_evaluate(const fax_network *net, const fax_dataset *data, fax_variant variant, double *accuracy);

/* Tiles `count` images starting at `first` from one split/variant into a
 * binary PPM grid `cols` wide. */
FAX_API fax_status fax_dump_ppm(const fax_dataset *data, int test, fax_variant variant, size_t first, size_t count,
                                size_t cols, const char *path);

/* ---- policy comparison -------------------------------------------------- */

/* One run per schedule string (e.g. "linear", "step:0.25:1") on shared data. */
FAX_API fax_status fax_compare_policies(const fax_config *cfg, const char *const *policies, size_t count,
                                        fax_comparison **out);
FAX_API void fax_comparison_destroy(fax_comparison *cmp);
FAX_API size_t fax_comparison_size(const fax_comparison *cmp);
/* Status of one policy's run; FAX_OK if it completed. */
FAX_API fax_status fax_comparison_status(const fax_comparison *cmp, size_t index);
FAX_API fax_status fax_comparison_write_csv(const fax_comparison *cmp, const char *path);
/* Writes each completed policy's metrics to `<prefix><index>.csv`. */
FAX_API fax_status fax_comparison_write_metrics(const fax_comparison *cmp, const char *prefix);

/* ---- schedule helpers ----------------------------------------------------- */

FAX_API fax_status fax_alpha_at(const char *schedule, uint64_t epoch, uint64_t total_epochs, double *alpha);
FAX_API double fax_lambda_prime(double lambda, double alpha);

#ifdef __cplusplus
}
#endif

#endif /* FAX_FAX_H_ */
