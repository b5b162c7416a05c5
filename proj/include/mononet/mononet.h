/**
 * Copyright (c) MonoNet Contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef MONONET_H
#define MONONET_H

/*
 * C interface to the mononet library.
 *
 * Every call returns an mn_status. On failure the message is available from
 * mn_last_error() until the next call on the same thread. Output handles and
 * strings are written only on success. Strings returned through char** are
 * owned by the caller and released with mn_string_free.
 *
 * Configuration and reports are exchanged as JSON text.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MONONET_BUILDING)
#    define MN_API __declspec(dllexport)
#  else
#    define MN_API __declspec(dllimport)
#  endif
#else
#  define MN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mn_status {
  MN_OK = 0,
  MN_ERR_INVALID_ARGUMENT = 1,
  MN_ERR_DIMENSION = 2,
  MN_ERR_PARSE = 3,
  MN_ERR_IO = 4,
  MN_ERR_NUMERICAL = 5,
  MN_ERR_UNSUPPORTED_VERSION = 6,
  MN_ERR_INTERNAL = 99
} mn_status;

typedef struct mn_network mn_network;
typedef struct mn_dataset mn_dataset;

MN_API const char* mn_version(void);
/* Message of the last failed call on this thread, "" if none. */
MN_API const char* mn_last_error(void);
MN_API const char* mn_status_name(mn_status status);
MN_API void mn_string_free(char* s);

/* ---- networks ---------------------------------------------------------- */

/* spec_json: {"architecture", "indicator", "kind", "hidden", ...}. */
MN_API mn_status mn_network_build(const char* spec_json, uint64_t seed, mn_network** out);
MN_API mn_status mn_network_from_json(const char* model_json, mn_network** out);
MN_API mn_status mn_network_load(const char* path, mn_network** out);
MN_API mn_status mn_network_save(const mn_network* net, const char* path);
MN_API mn_status mn_network_to_json(const mn_network* net, char** out);
MN_API void mn_network_free(mn_network* net);

MN_API mn_status mn_network_input_dim(const mn_network* net, size_t* out);
MN_API mn_status mn_network_output_dim(const mn_network* net, size_t* out);
MN_API mn_status mn_network_param_count(const mn_network* net, size_t* out);

/* Forward pass on normalized inputs; out receives output_dim values. */
MN_API mn_status mn_network_forward(const mn_network* net, const double* x, size_t x_len,
                                    double* out, size_t out_len);
/* Same on raw inputs, through the model's stored input scaling if any. */
MN_API mn_status mn_network_predict(const mn_network* net, const double* x, size_t x_len,
                                    double* out, size_t out_len);

/* Network with plain activations that computes what `net` computes when each
 * hidden activation is replaced by alpha * rho(h) + beta. Every hidden layer
 * must use the saturated branch only; alpha must be positive. */
MN_API mn_status mn_network_rescale(const mn_network* net, double alpha, double beta,
                                    mn_network** out);

/* ---- datasets ---------------------------------------------------------- */

/* JSON array of the built-in descriptor names. */
MN_API mn_status mn_builtin_names(char** out);
MN_API mn_status mn_builtin_descriptor(const char* name, char** out);

MN_API mn_status mn_dataset_load_builtin(const char* name, const char* csv_path,
                                         mn_dataset** out);
MN_API mn_status mn_dataset_load(const char* descriptor_json, const char* csv_path,
                                 mn_dataset** out);
MN_API mn_status mn_dataset_synthetic(size_t n, double noise_std, uint64_t seed,
                                      mn_dataset** out);
MN_API void mn_dataset_free(mn_dataset* data);
MN_API mn_status mn_dataset_shape(const mn_dataset* data, size_t* rows, size_t* cols);

/* ---- training and evaluation ------------------------------------------ */

/* Split, normalize, optional grid selection and repeated training.
 * best_out (may be NULL) receives the best run's model; report_out the
 * protocol report. */
MN_API mn_status mn_train(const mn_dataset* data, const char* config_json,
                          mn_network** best_out, char** report_out);
MN_API mn_status mn_grid(const mn_dataset* data, const char* config_json, char** report_out);

/* metric: "mse", "rmse", "accuracy" or "log_loss"; data is raw. */
MN_API mn_status mn_evaluate(const mn_network* net, const mn_dataset* data, const char* metric,
                             double* out);

/* Pairwise and gradient-sign audits. data may be NULL, otherwise the box is
 * taken from it. passed_out may be NULL. */
MN_API mn_status mn_verify(const mn_network* net, const mn_dataset* data,
                           const char* config_json, char** report_out, int* passed_out);

/* ---- demos ------------------------------------------------------------- */

/* {"report": {...}, "files": {"name.csv": "..."}} */
MN_API mn_status mn_fit_demo(const char* config_json, char** result_out);
MN_API mn_status mn_synth(const char* config_json, char** result_out);

#ifdef __cplusplus
}
#endif

#endif /* MONONET_H */
