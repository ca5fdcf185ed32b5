//
// Copyright 2026 The Mehestan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

/*
 * C interface to the robust sparse voting library.
 *
 * Every function returns an mh_status. On failure, mh_last_error() returns a
 * message for the calling thread, and mh_last_error_line() the 1-based input
 * line for parse errors (0 otherwise). Handles are opaque and owned by the
 * caller; release them with the matching *_destroy function.
 *
 * Scores are passed as parallel arrays; a NULL `present` mask means every
 * score is reported, otherwise present[i] == 0 marks score i as unreported.
 * The resilience parameter L accepts INFINITY (MH_L_INFINITE) for the
 * unregularized median / mean limits.
 */
#ifndef MEHESTAN_MEHESTAN_H_
#define MEHESTAN_MEHESTAN_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MEHESTAN_BUILDING_LIBRARY)
#define MH_API __declspec(dllexport)
#else
#define MH_API __declspec(dllimport)
#endif
#else
#define MH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define MH_L_INFINITE (__builtin_inf())

typedef enum mh_status {
  MH_OK = 0,
  MH_ERR_INVALID_ARGUMENT = 1,
  MH_ERR_PARSE = 2,
  MH_ERR_INVARIANT = 3,
  MH_ERR_EMPTY_INPUT = 4,
  MH_ERR_IO = 5,
  MH_ERR_CONFIG = 6,
  MH_ERR_DEGENERATE = 7,
  MH_ERR_NO_COMPARABLE_PAIRS = 8,
  MH_ERR_NO_COMMON_ALTERNATIVES = 9,
  MH_ERR_ZERO_VARIANCE = 10,
  MH_ERR_INTERNAL = 99
} mh_status;

MH_API const char* mh_version(void);
MH_API const char* mh_last_error(void);
MH_API size_t mh_last_error_line(void);

/* ---- scalar primitives ------------------------------------------------- */

MH_API mh_status mh_mean(size_t count, const double* weights,
                         const double* scores, const unsigned char* present,
                         double* out);
MH_API mh_status mh_median(size_t count, const double* weights,
                           const double* scores, const unsigned char* present,
                           double* out);
MH_API mh_status mh_qrmed(double L, size_t count, const double* weights,
                          const double* scores, const unsigned char* present,
                          double* out);
MH_API mh_status mh_clipped_mean(size_t count, const double* weights,
                                 const double* scores,
                                 const unsigned char* present, double center,
                                 double radius, double* out);
MH_API mh_status mh_brmean(double L, size_t count, const double* weights,
                           const double* scores, const unsigned char* present,
                           double* out);

typedef enum mh_prior_kind { MH_PRIOR_POINT = 0, MH_PRIOR_LAPLACE = 1 } mh_prior_kind;

MH_API mh_status mh_mrdist(double z, mh_prior_kind kind, double location,
                           double scale, double* out);
/* kinds/locations/scales are parallel arrays of length count. */
MH_API mh_status mh_qrmed_uncertain(double L, size_t count,
                                    const double* weights,
                                    const mh_prior_kind* kinds,
                                    const double* locations,
                                    const double* scales, double* out);

/* ---- datasets ---------------------------------------------------------- */

/* A dataset is a sparse score matrix plus voting rights and the original
 * voter / alternative ids. */
typedef struct mh_dataset mh_dataset;

/* Dense ids 0..voters-1 and 0..alternatives-1, unit voting rights. */
MH_API mh_status mh_dataset_create(size_t voters, size_t alternatives,
                                   mh_dataset** out);
/* Loads a `voter,alternative,score` file and an optional `voter,weight`
 * file (weights_path may be NULL). */
MH_API mh_status mh_dataset_load(const char* scores_path,
                                 const char* weights_path, mh_dataset** out);
MH_API void mh_dataset_destroy(mh_dataset* dataset);

MH_API size_t mh_dataset_num_voters(const mh_dataset* dataset);
MH_API size_t mh_dataset_num_alternatives(const mh_dataset* dataset);
MH_API mh_status mh_dataset_set_score(mh_dataset* dataset, size_t voter,
                                      size_t alternative, double score);
MH_API mh_status mh_dataset_set_weight(mh_dataset* dataset, size_t voter,
                                       double weight);
/* Original id of dense alternative index `alternative`. */
MH_API mh_status mh_dataset_alternative_id(const mh_dataset* dataset,
                                           size_t alternative, uint64_t* out);

/* ---- aggregation ------------------------------------------------------- */

typedef struct mh_aggregate_options {
  int differential_privacy; /* nonzero: add Laplace noise */
  double dp_epsilon;
  uint64_t dp_seed;
  int polarization; /* nonzero: compute psi_plus / psi_minus */
  unsigned threads; /* 0 = hardware concurrency; defaults to 1 */
} mh_aggregate_options;

MH_API void mh_aggregate_options_init(mh_aggregate_options* options);

typedef struct mh_result mh_result;

/* options may be NULL for defaults. */
MH_API mh_status mh_aggregate(const mh_dataset* dataset, double L,
                              const mh_aggregate_options* options,
                              mh_result** out);
MH_API void mh_result_destroy(mh_result* result);

MH_API size_t mh_result_num_alternatives(const mh_result* result);
MH_API size_t mh_result_num_voters(const mh_result* result);
/* Each copies one value per alternative (or voter) into `out`, which must
 * hold at least `capacity` doubles. */
MH_API mh_status mh_result_scores(const mh_result* result, double* out,
                                  size_t capacity);
MH_API mh_status mh_result_scalings(const mh_result* result, double* out,
                                    size_t capacity);
MH_API mh_status mh_result_translations(const mh_result* result, double* out,
                                        size_t capacity);
/* MH_ERR_INVALID_ARGUMENT unless polarization was requested. */
MH_API mh_status mh_result_polarization(const mh_result* result,
                                        double* psi_plus, double* psi_minus,
                                        size_t capacity);

/* Writes `alternative,score[,psi_plus,psi_minus]` to scores_path and
 * `voter,scaling,translation` to diagnostics_path; either may be NULL. */
MH_API mh_status mh_result_write(const mh_result* result,
                                 const mh_dataset* dataset,
                                 const char* scores_path,
                                 const char* diagnostics_path);

/* ---- benchmark --------------------------------------------------------- */

typedef void (*mh_progress_fn)(const char* line, void* user);

/* Runs the sweep described by the config file and writes records.csv and
 * summary.csv into out_dir (created if missing). threads == 0 uses the
 * hardware concurrency; progress may be NULL. */
MH_API mh_status mh_simulate(const char* config_path, const char* out_dir,
                             unsigned threads, mh_progress_fn progress,
                             void* user);

#ifdef __cplusplus
}
#endif

#endif /* MEHESTAN_MEHESTAN_H_ */
