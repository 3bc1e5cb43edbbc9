/*
 * Copyright 2026 The coinlab Authors
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

/*
 * C interface to libcoinlab.
 *
 * All handles are opaque and owned by the caller once returned; release them
 * with the matching *_free function. Functions return a coinlab_status; on
 * anything other than COINLAB_OK, coinlab_last_error() describes the failure
 * (the message is thread-local and valid until the next failing call on the
 * same thread).
 */
#ifndef COINLAB_COINLAB_H
#define COINLAB_COINLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(COINLAB_BUILDING_LIBRARY)
#    define COINLAB_API __declspec(dllexport)
#  else
#    define COINLAB_API __declspec(dllimport)
#  endif
#else
#  define COINLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coinlab_status {
  COINLAB_OK = 0,
  COINLAB_E_NULL_ARGUMENT = 1,
  COINLAB_E_PARAMETER = 2,  /* inadmissible parameters (e.g. 2t >= n) */
  COINLAB_E_BUDGET = 3,     /* request above a fixed computational budget */
  COINLAB_E_USAGE = 4,      /* unknown key, unparsable value, missing seed */
  COINLAB_E_CONVERGENCE = 5,
  COINLAB_E_IO = 6,
  COINLAB_E_BUFFER_TOO_SMALL = 7,
  COINLAB_E_INTERNAL = 8
} coinlab_status;

typedef struct coinlab_config coinlab_config;
typedef struct coinlab_report coinlab_report;

COINLAB_API const char* coinlab_version(void);
COINLAB_API const char* coinlab_last_error(void);
COINLAB_API const char* coinlab_status_name(coinlab_status status);

/* Run configuration ------------------------------------------------------- */

COINLAB_API coinlab_status coinlab_config_new(coinlab_config** out);
COINLAB_API void coinlab_config_free(coinlab_config* config);

/* Keys: subcommand, n, t, epsilon, c1, m, trials, seed, workers, out,
 * format, confidence, max-iterations, matrix-csv. */
COINLAB_API coinlab_status coinlab_config_set(coinlab_config* config, const char* key,
                                              const char* value);

/* Reads flat `key = value` lines (`#` starts a comment). Later calls to
 * coinlab_config_set override values loaded here. */
COINLAB_API coinlab_status coinlab_config_load(coinlab_config* config, const char* path);

/* Output path configured with key "out"; empty string means standard output. */
COINLAB_API const char* coinlab_config_output_path(const coinlab_config* config);

/* Reports ----------------------------------------------------------------- */

COINLAB_API coinlab_status coinlab_run(const coinlab_config* config, coinlab_report** out);
COINLAB_API void coinlab_report_free(coinlab_report* report);

/* Rendered in the configured format (json or csv). Owned by the report. */
COINLAB_API const char* coinlab_report_text(const coinlab_report* report);

/* 0 when no check failed or errored, 1 otherwise. */
COINLAB_API int coinlab_report_exit_code(const coinlab_report* report);

COINLAB_API coinlab_status coinlab_report_counts(const coinlab_report* report, uint64_t* pass,
                                                 uint64_t* fail, uint64_t* inconclusive,
                                                 uint64_t* errors);

/* Writes the rendered report to `path`. */
COINLAB_API coinlab_status coinlab_report_write(const coinlab_report* report, const char* path);

/* Direct numeric entry points --------------------------------------------- */

typedef struct coinlab_thresholds {
  double alpha;
  double beta;
  double beta_half;
  double beta_quarter;
  double alpha_prime;
  double norm_threshold;
} coinlab_thresholds;

COINLAB_API coinlab_status coinlab_derive(int64_t n, int64_t t, double epsilon, int64_t m,
                                          coinlab_thresholds* out);

/* 2 exp(-(beta/4)^2 / (2tn)); 0 when t == 0. */
COINLAB_API coinlab_status coinlab_stopped_stream_bound(int64_t n, int64_t t, double* out);

/* Pr(max of an n-step walk >= r) as a lowest-terms "p/q" string written to
 * buffer (NUL-terminated), plus its double value when `value` is non-null. */
COINLAB_API coinlab_status coinlab_prob_max_ge(int64_t n, int64_t r, char* buffer,
                                               size_t buffer_size, double* value);

/* Largest singular value of a row-major rows x cols matrix. On
   COINLAB_E_CONVERGENCE, *value still receives the best estimate reached. */
COINLAB_API coinlab_status coinlab_spectral_norm(const double* data, size_t rows, size_t cols,
                                                 double rel_tol, int max_iters, double* value,
                                                 int* iterations_used);

#ifdef __cplusplus
}
#endif

#endif /* COINLAB_COINLAB_H */
