/* Copyright 2026 The JLSE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/* C interface to the state-estimation library.
 *
 * Objects are opaque handles created by jlse_*_create/generate/load/train
 * and released with the matching jlse_*_free. Every fallible function
 * returns a jlse_status; on failure jlse_last_error() describes the problem
 * and jlse_last_error_detail() gives its finer category. Both are
 * thread-local and valid until the next failing call on the same thread.
 *
 * Sequences cross the boundary as contiguous time-major arrays: element
 * (t, i) of a T x d sequence lives at [t * d + i].
 */

#ifndef JLSE_C_API_H_
#define JLSE_C_API_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(JLSE_BUILDING_LIBRARY)
#define JLSE_API __declspec(dllexport)
#else
#define JLSE_API __declspec(dllimport)
#endif
#else
#define JLSE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit statuses. */
typedef enum jlse_status {
  JLSE_OK = 0,
  JLSE_ERR_USAGE = 1,    /* invalid argument, unknown name, bad model */
  JLSE_ERR_IO = 2,       /* missing/unreadable/malformed files, shape mismatch */
  JLSE_ERR_NUMERIC = 3,  /* singular covariance, integration or training divergence */
  JLSE_ERR_INTERNAL = 4
} jlse_status;

typedef enum jlse_error_detail {
  JLSE_DETAIL_NONE = 0,
  JLSE_DETAIL_INVALID_ARGUMENT,
  JLSE_DETAIL_INVALID_MODEL,
  JLSE_DETAIL_NOT_FOUND,
  JLSE_DETAIL_IO,
  JLSE_DETAIL_MALFORMED,
  JLSE_DETAIL_DIMENSION_MISMATCH,
  JLSE_DETAIL_SINGULAR,
  JLSE_DETAIL_INTEGRATION_DIVERGED,
  JLSE_DETAIL_TRAINING_DIVERGED,
  JLSE_DETAIL_INTERNAL
} jlse_error_detail;

typedef enum jlse_split {
  JLSE_SPLIT_TRAIN = 0,
  JLSE_SPLIT_VAL = 1,
  JLSE_SPLIT_TEST = 2
} jlse_split;

typedef struct jlse_dataset jlse_dataset;
typedef struct jlse_network jlse_network;

typedef struct jlse_dataset_info {
  char system[32];
  int n;
  int m;
  double dt;
  int sequence_length;
  int train_count;
  int val_count;
  int test_count;
  uint64_t base_seed;
} jlse_dataset_info;

typedef void (*jlse_log_fn)(const char* line, void* user);

JLSE_API const char* jlse_version(void);
JLSE_API const char* jlse_last_error(void);
JLSE_API jlse_error_detail jlse_last_error_detail(void);

/* ---- datasets ---------------------------------------------------------- */

/* system: "springs", "pendulum" or "vdp"; count >= 10. */
JLSE_API jlse_status jlse_dataset_generate(const char* system, int sequence_length,
                                           int count, uint64_t base_seed,
                                           jlse_dataset** out);
JLSE_API jlse_status jlse_dataset_load(const char* dir, jlse_dataset** out);
JLSE_API jlse_status jlse_dataset_save(const jlse_dataset* ds, const char* dir);
JLSE_API void jlse_dataset_free(jlse_dataset* ds);
JLSE_API jlse_status jlse_dataset_info_get(const jlse_dataset* ds,
                                           jlse_dataset_info* out);
/* states: (T+1) x n, measurements: T x m. Either pointer may be NULL. */
JLSE_API jlse_status jlse_dataset_sequence(const jlse_dataset* ds, jlse_split split,
                                           int index, double* states,
                                           double* measurements);

/* ---- filters ----------------------------------------------------------- */

/* KF for the linear system, EKF otherwise; estimates: T x n. */
JLSE_API jlse_status jlse_filter_run(const jlse_dataset* ds, jlse_split split,
                                     int index, double* estimates);

/* ---- networks ---------------------------------------------------------- */

/* arch: "ern", "jrn", "elstm" or "jlstm". Freshly initialized weights. */
JLSE_API jlse_status jlse_network_create(const char* arch, int m, int n, int hidden,
                                         uint64_t seed, jlse_network** out);
/* Trains on the dataset with the system preset for `arch`. overrides_json
 * may be NULL or an object with learning_rate, batch_size, max_epochs,
 * patience, truncation_window, hidden, seed. */
JLSE_API jlse_status jlse_network_train(const jlse_dataset* ds, const char* arch,
                                        const char* overrides_json, int threads,
                                        jlse_network** out);
JLSE_API jlse_status jlse_network_load(const char* path, jlse_network** out);
JLSE_API jlse_status jlse_network_save(const jlse_network* net, const char* path);
JLSE_API void jlse_network_free(jlse_network* net);
JLSE_API long jlse_network_param_count(const jlse_network* net);
/* measurements: T x m, estimates: T x n. */
JLSE_API jlse_status jlse_network_predict(const jlse_network* net,
                                          const double* measurements,
                                          int sequence_length, double* estimates);

/* ---- metrics ----------------------------------------------------------- */

/* truth, estimates: m_test sequences of T x n, stored back to back. */
JLSE_API jlse_status jlse_nmse(const double* truth, const double* estimates,
                               int m_test, int sequence_length, int n, double* out);
/* curve: T entries. */
JLSE_API jlse_status jlse_error_curve(const double* truth, const double* estimates,
                                      int m_test, int sequence_length, int n,
                                      double* curve);

/* ---- experiment commands ----------------------------------------------- */

/* spec_json: JSON object of settings (system, seed, sequence_count,
 * sequence_length, desk_scale, threads, out, dataset, config, hidden,
 * learning_rate, batch_size, max_epochs, patience, truncation_window,
 * estimators, oor, checkpoints). Progress lines go to `log` when given. */
JLSE_API jlse_status jlse_cmd_generate(const char* spec_json, jlse_log_fn log,
                                       void* user);
JLSE_API jlse_status jlse_cmd_train(const char* spec_json, const char* arch,
                                    jlse_log_fn log, void* user);
JLSE_API jlse_status jlse_cmd_evaluate(const char* spec_json, jlse_log_fn log,
                                       void* user);
JLSE_API jlse_status jlse_cmd_reproduce(const char* spec_json, jlse_log_fn log,
                                        void* user);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* JLSE_C_API_H_ */
