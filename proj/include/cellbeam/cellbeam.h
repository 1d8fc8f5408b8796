// SPDX-License-Identifier: Apache-2.0
//
// cellbeam: two-cell downlink beamforming solvers and large-system limits
// Copyright (C) 2026 The cellbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CELLBEAM_CELLBEAM_H
#define CELLBEAM_CELLBEAM_H

/* C interface of the cellbeam library. All functions return a status code;
 * on failure cb_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * cb_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(CELLBEAM_BUILDING_LIBRARY)
#define CB_API __attribute__((visibility("default")))
#else
#define CB_API
#endif

typedef enum cb_status
{
    CB_OK = 0,
    CB_ERR_INVALID_ARGUMENT = 1,
    CB_ERR_CONFIG = 2,
    CB_ERR_INFEASIBLE = 3,
    CB_ERR_NUMERIC = 4, /* iteration budget exhausted or non-finite values */
    CB_ERR_RANGE = 5,
    CB_ERR_DIMENSION = 6,
    CB_ERR_RANK = 7,
    CB_ERR_IO = 8,
    CB_ERR_INTERNAL = 9
} cb_status;

typedef enum cb_scheme
{
    CB_SCHEME_SCP = 0,
    CB_SCHEME_CBF = 1,
    CB_SCHEME_MCP = 2
} cb_scheme;

typedef struct cb_config cb_config;
typedef struct cb_channels cb_channels;
typedef struct cb_experiment cb_experiment;

CB_API const char *cb_version(void);
CB_API const char *cb_last_error(void);
CB_API const char *cb_status_name(cb_status status);
CB_API void cb_string_free(char *text);

/* Parses a scheme name ("scp", "CBF", ...). */
CB_API cb_status cb_scheme_parse(const char *name, cb_scheme *out);

/* ---- scenario ---------------------------------------------------------- */

CB_API cb_status cb_config_create(int64_t n_antennas, int64_t n_users, double epsilon, double sigma2, double power,
                                  uint64_t seed, cb_config **out);
/* JSON object or key = value lines. */
CB_API cb_status cb_config_parse(const char *text, cb_config **out);
CB_API cb_status cb_config_load(const char *path, cb_config **out);
/* Any output pointer may be NULL. */
CB_API cb_status cb_config_get(const cb_config *config, int64_t *n_antennas, int64_t *n_users, double *epsilon,
                               double *sigma2, double *power, uint64_t *seed);
CB_API void cb_config_destroy(cb_config *config);

CB_API cb_status cb_channels_sample(const cb_config *config, uint64_t stream_id, cb_channels **out);
CB_API cb_status cb_channels_from_json(const char *json, cb_channels **out);
CB_API cb_status cb_channels_to_json(const cb_channels *channels, char **out_json);
/* Entry (user, antenna) of H(user_cell, bs), cells numbered from 0. */
CB_API cb_status cb_channels_entry(const cb_channels *channels, int user_cell, int bs, int64_t user, int64_t antenna,
                                   double *re, double *im);
CB_API void cb_channels_destroy(cb_channels *channels);

/* ---- finite-system solvers --------------------------------------------- */

/* Optimal beamformers at a fixed target. JSON keys: dual, primal,
 * duality_gap. Unreachable targets return CB_ERR_INFEASIBLE. */
CB_API cb_status cb_solve_fixed_gamma(const cb_channels *channels, cb_scheme scheme, double gamma, char **out_json);

/* Max-min SINR under the per-BS budget; gamma_tolerance <= 0 selects the
 * default. A zero gamma_star returns CB_ERR_INFEASIBLE with the JSON still
 * filled in. */
CB_API cb_status cb_solve_max_min(const cb_channels *channels, cb_scheme scheme, double gamma_tolerance,
                                  char **out_json);

/* Baselines: "scp_zf", "gzf", "mcp_zf", "td_scp". */
CB_API cb_status cb_baseline_max_min(const cb_channels *channels, const char *baseline, char **out_json);

/* ---- large-system limits ----------------------------------------------- */

CB_API cb_status cb_gamma_star(cb_scheme scheme, double beta, double epsilon, double snr, double *out);
/* CB_ERR_INFEASIBLE outside the feasible region. */
CB_API cb_status cb_lambda_bar(cb_scheme scheme, double gamma, double beta, double epsilon, double *out);
CB_API cb_status cb_p_bar(cb_scheme scheme, double gamma, double beta, double epsilon, double sigma2, double *out);
CB_API cb_status cb_effective_interference(cb_scheme scheme, double snr, double epsilon, double gamma, double beta,
                                           double *out);
/* snr <= 0 selects the unlimited-power test. */
CB_API cb_status cb_is_feasible(cb_scheme scheme, double gamma, double beta, double epsilon, double snr, int *out);
CB_API cb_status cb_td_gamma_star(double beta, double snr, double *out);
CB_API cb_status cb_td_rate(double beta, double snr, double *out);
CB_API cb_status cb_asymptotic_point(cb_scheme scheme, double beta, double epsilon, double snr, char **out_json);
CB_API cb_status cb_optimal_beta(cb_scheme scheme, double snr, double epsilon, char **out_json);

/* CSV rows scheme,beta,epsilon,snr_db,gamma_star,rate,feasible for
 * beta = lo, lo + step, ..., hi. `scheme` may also be "td_scp". */
CB_API cb_status cb_curve_csv(const char *scheme, double beta_lo, double beta_hi, double beta_step, double epsilon,
                              double snr_db, char **out_csv);

/* ---- experiments ------------------------------------------------------- */

CB_API cb_status cb_experiment_parse(const char *json, cb_experiment **out);
CB_API cb_status cb_experiment_load(const char *path, cb_experiment **out);
/* Empty string when the spec has no output_path. */
CB_API cb_status cb_experiment_output_path(const cb_experiment *experiment, char **out_path);
/* Either output pointer may be NULL. */
CB_API cb_status cb_experiment_run(const cb_experiment *experiment, char **out_csv, char **out_summary_json);
/* Result rows with lsa_gamma and lsa_rate_nats columns. */
CB_API cb_status cb_experiment_compare(const cb_experiment *experiment, char **out_csv);
CB_API void cb_experiment_destroy(cb_experiment *experiment);

#ifdef __cplusplus
}
#endif

#endif
