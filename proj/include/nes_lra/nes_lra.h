/*
 * Copyright 2026 The nes-lra Authors
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
 * C interface to the nes-lra library: an ask/tell xNES optimizer with
 * learning-rate adaptation for the covariance parameters, plus the benchmark
 * harness. Objects are opaque handles; every fallible call returns an
 * nes_status and leaves a message retrievable with nes_last_error() on the
 * calling thread.
 */

#ifndef NES_LRA_H_
#define NES_LRA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NES_LRA_BUILDING)
#    define NES_LRA_API __declspec(dllexport)
#  else
#    define NES_LRA_API __declspec(dllimport)
#  endif
#else
#  define NES_LRA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nes_status {
  NES_OK = 0,
  NES_ERR_INVALID_CONFIG = 1,
  NES_ERR_INVALID_INPUT = 2,
  NES_ERR_INVALID_MATRIX = 3,
  NES_ERR_SINGULAR_MATRIX = 4,
  NES_ERR_NUMERICAL_FAILURE = 5,
  NES_ERR_IO = 6,
  NES_ERR_INTERNAL = 7
} nes_status;

NES_LRA_API const char* nes_status_string(nes_status status);

/* Message of the most recent failure on this thread; "" if none. */
NES_LRA_API const char* nes_last_error(void);

NES_LRA_API const char* nes_version(void);

/* (3/5)(3 + ln d)/(d sqrt d) */
NES_LRA_API double nes_default_learning_rate(size_t dim);

/*
 * Adaptation hyperparameters. A field <= 0 selects its default:
 * alpha = 1.3, beta = 0.2, eta_min = the default learning rate, eta_max = 1.
 * alpha and eta bounds apply to both the sigma and the B channel; beta is both
 * the path cumulation factor and the rate damping factor.
 */
typedef struct nes_lr_options {
  double alpha;
  double beta;
  double eta_min;
  double eta_max;
} nes_lr_options;

/* ---- optimizer ---------------------------------------------------------- */

typedef struct nes_optimizer nes_optimizer;

typedef struct nes_optimizer_options {
  size_t dim;            /* >= 2 */
  const double* mean;    /* dim entries */
  double sigma;          /* > 0 */
  size_t lambda;         /* >= 2 */
  uint64_t seed;
  int adaptive;          /* nonzero: adapt eta_sigma and eta_B */
  double multiplier;     /* fixed mode: rates = default * multiplier */
  nes_lr_options lr;
} nes_optimizer_options;

typedef struct nes_optimizer_status {
  uint64_t generation;
  double sigma;
  double eta_sigma;
  double eta_b;
  double l_theta;
  double gamma;
  double best_value;     /* +inf before the first tell */
} nes_optimizer_status;

/* Fills the defaults (sigma 1, lambda 10, seed 0, adaptive) for the given
 * dimension; mean stays NULL. */
NES_LRA_API void nes_optimizer_options_init(nes_optimizer_options* options, size_t dim);

NES_LRA_API nes_status nes_optimizer_create(const nes_optimizer_options* options,
                                            nes_optimizer** out);
NES_LRA_API void nes_optimizer_destroy(nes_optimizer* optimizer);

NES_LRA_API size_t nes_optimizer_dim(const nes_optimizer* optimizer);
NES_LRA_API size_t nes_optimizer_lambda(const nes_optimizer* optimizer);

/*
 * Writes the pending batch, row-major lambda x dim, into candidates (len must
 * be lambda * dim). Repeated calls before tell return the same batch.
 */
NES_LRA_API nes_status nes_optimizer_ask(nes_optimizer* optimizer, double* candidates, size_t len);

/* values[i] is the objective value of row i of the last ask (len == lambda). */
NES_LRA_API nes_status nes_optimizer_tell(nes_optimizer* optimizer, const double* values,
                                          size_t len);

NES_LRA_API nes_status nes_optimizer_get_status(const nes_optimizer* optimizer,
                                                nes_optimizer_status* out);
NES_LRA_API nes_status nes_optimizer_get_mean(const nes_optimizer* optimizer, double* mean,
                                              size_t len);

/* ---- harness ------------------------------------------------------------ */

typedef struct nes_experiment_options {
  const char* function;  /* sphere | ellipsoid | rastrigin | bohachevsky | random */
  size_t dim;
  size_t lambda;
  int adaptive;
  double multiplier;
  double target;
  uint64_t max_evals;
  size_t trials;
  uint64_t base_seed;
  size_t trace_every;
  size_t workers;
  int write_traces;
  nes_lr_options lr;
} nes_experiment_options;

typedef struct nes_aggregate {
  size_t trials;
  size_t successes;
  double success_rate;
  double mean_evals_success; /* NaN when no trial succeeded */
  double score;              /* NaN when no trial succeeded */
} nes_aggregate;

/*
 * Defaults: sphere, dim 10, lambda 10, adaptive, multiplier 1, target 1e-8,
 * max_evals 500000, 20 trials, seed 0, trace every generation, 1 worker,
 * traces on.
 */
NES_LRA_API void nes_experiment_options_init(nes_experiment_options* options);

/*
 * Runs the trials and writes out_dir/aggregate.csv plus one
 * trace_<function>_<lambda>_<mode>_<seed>.csv per trial. out may be NULL.
 */
NES_LRA_API nes_status nes_run_experiment(const nes_experiment_options* options,
                                          const char* out_dir, nes_aggregate* out);

typedef struct nes_sweep_options {
  const char* preset;        /* named grid, or NULL for an explicit grid */
  nes_experiment_options base; /* lambda/adaptive/multiplier ignored */
  const size_t* lambdas;     /* explicit grid; ignored with a preset */
  size_t n_lambdas;
  const double* multipliers; /* fixed-rate modes */
  size_t n_multipliers;
  int include_adaptive;
  int trials_set;            /* nonzero: base.trials overrides the preset */
} nes_sweep_options;

NES_LRA_API void nes_sweep_options_init(nes_sweep_options* options);

/* Executes the grid; rows are appended to out_dir/aggregate.csv as they
 * finish and rows already present are skipped. rows may be NULL. */
NES_LRA_API nes_status nes_sweep(const nes_sweep_options* options, const char* out_dir,
                                 size_t* rows);

/* i-th preset name, or NULL past the end. */
NES_LRA_API const char* nes_preset_name(size_t i);

#ifdef __cplusplus
}
#endif

#endif /* NES_LRA_H_ */
