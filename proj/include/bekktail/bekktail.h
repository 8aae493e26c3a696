/*
Copyright 2026 bekktail developers
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


#ifndef BEKKTAIL_H
#define BEKKTAIL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define BEKK_API __attribute__((visibility("default")))
#else
#define BEKK_API
#endif

/* Status codes. Every call returning bekk_status also records a message
   retrievable with bekk_last_error() on the calling thread. */
typedef enum bekk_status {
    BEKK_OK = 0,
    BEKK_E_PARSE = 1,
    BEKK_E_SHAPE = 2,
    BEKK_E_NOT_POSITIVE_DEFINITE = 3,
    BEKK_E_ALL_ZERO = 4,
    BEKK_E_DIMENSION = 5,
    BEKK_E_INVALID_ARGUMENT = 6,
    BEKK_E_COMPLEX_EIGENVALUES = 7,
    BEKK_E_NOT_DIAGONALIZABLE = 8,
    BEKK_E_NOT_SIM_DIAGONALIZABLE = 9,
    BEKK_E_NO_COMMON_EIGENVECTOR = 10,
    BEKK_E_OVERFLOW = 11,
    BEKK_E_NO_ROOT = 12,
    BEKK_E_TIE_UNDETERMINED = 13,
    BEKK_E_NO_SIGN_CHANGE = 14,
    BEKK_E_NOT_APPLICABLE = 15,
    BEKK_E_INSUFFICIENT_DATA = 16,
    BEKK_E_UNKNOWN_EXAMPLE = 17,
    BEKK_E_IO = 18,
    BEKK_E_INTERNAL = 99
} bekk_status;

typedef struct bekk_model bekk_model;

BEKK_API const char* bekk_version(void);
BEKK_API const char* bekk_status_name(bekk_status status);
/* Message of the last failed call on this thread; "" after success. */
BEKK_API const char* bekk_last_error(void);

/* 0 uses all hardware threads. */
BEKK_API void bekk_set_threads(unsigned n);

/* ---- models ---- */
BEKK_API bekk_status bekk_model_from_json(const char* json_text, bekk_model** out);
BEKK_API bekk_status bekk_model_from_file(const char* path, bekk_model** out);
BEKK_API bekk_status bekk_model_from_example(const char* example_id, bekk_model** out);
BEKK_API void bekk_model_free(bekk_model* model);
BEKK_API bekk_status bekk_model_dims(const bekk_model* model, int* d, int* q, int* l);
/* Canonical JSON of the model; free with bekk_string_free. */
BEKK_API bekk_status bekk_model_to_json(const bekk_model* model, char** out);
BEKK_API bekk_status bekk_model_hash(const bekk_model* model, char** out);

/* ---- closed forms ---- */
BEKK_API double bekk_nelson_bound(void);
BEKK_API bekk_status bekk_gaussian_abs_moment(double alpha, double sigma, double* out);
BEKK_API bekk_status bekk_moment_log_derivative(double alpha, double sigma, double* out);
BEKK_API bekk_status bekk_solve_component_tail_index(double sigma, double* out);

/* ---- Monte Carlo ---- */
typedef enum bekk_stationarity { BEKK_STATIONARY = 0, BEKK_NONSTATIONARY = 1, BEKK_INCONCLUSIVE = 2 } bekk_stationarity;

BEKK_API bekk_status bekk_lyapunov(const bekk_model* model, int n_horizon, int replicas, uint64_t seed,
                                   double* gamma_hat, double* stderr_out, bekk_stationarity* verdict);

typedef struct bekk_sim_config {
    uint64_t seed;
    long burn_in;
    long n_samples;
    int replicas;
    int thinning;
} bekk_sim_config;

BEKK_API void bekk_sim_config_init(bekk_sim_config* cfg);

/* Row-major n_samples x dq buffer; free with bekk_buffer_free. */
BEKK_API bekk_status bekk_simulate(const bekk_model* model, const bekk_sim_config* cfg, double** samples,
                                   size_t* rows, size_t* cols);
/* Same draws written as CSV (header t,v1,...). */
BEKK_API bekk_status bekk_simulate_csv(const bekk_model* model, const bekk_sim_config* cfg, const char* path);

BEKK_API bekk_status bekk_hill(const double* sample, size_t n, long k, double* alpha_hat, double* ci_low,
                               double* ci_high);

/* ---- pipeline ---- */
typedef struct bekk_analyze_options {
    uint64_t seed;
    int simulate;
    int check_assumptions;
    int require_stationary;
    long samples;
    int replicas;
    long burn_in;
    int lyapunov_horizon;
    int lyapunov_replicas;
    long constants_n_mc;
    int spectral_horizon;
    int spectral_particles;
    const char* emit_csv_dir; /* NULL: no CSV side files */
} bekk_analyze_options;

BEKK_API void bekk_analyze_options_init(bekk_analyze_options* opts);

/* JSON report (free with bekk_string_free) and the process exit code the
   report implies: 0, 3 (assumption failed) or 4 (not stationary). */
BEKK_API bekk_status bekk_analyze(const bekk_model* model, const bekk_analyze_options* opts, char** report_json,
                                  int* exit_code);

/* Runs a shipped example and checks its qualitative conclusion. */
BEKK_API bekk_status bekk_reproduce(const char* example_id, const bekk_analyze_options* opts, char** report_json,
                                    int* passed);
/* Comma-separated example ids; static storage. */
BEKK_API const char* bekk_example_ids(void);

BEKK_API void bekk_string_free(char* s);
BEKK_API void bekk_buffer_free(double* buffer);

#ifdef __cplusplus
}
#endif

#endif /* BEKKTAIL_H */
