/* Copyright 2026 The teleportsim developers
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

/* C interface to the teleportsim gate-teleportation simulator.
 *
 * Every function that can fail returns a tsim_status; on failure the
 * thread-local message from tsim_last_error() describes what went wrong.
 * Strings handed out through char** are heap copies; release them with
 * tsim_string_free.
 */

#ifndef TELEPORTSIM_H_
#define TELEPORTSIM_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsim_status {
  TSIM_OK = 0,
  TSIM_ERROR_VALIDATION = 1, /* rejected input: bad config, name, range, ... */
  TSIM_ERROR_SIMULATION = 2  /* runtime failure: deadlock, synthesis check, io */
} tsim_status;

const char* tsim_version(void);

/* Message from the most recent failing call on this thread. */
const char* tsim_last_error(void);

void tsim_string_free(char* s);

/* Human-readable classically-controlled correction table for a gate
 * ("CNOT", "DCNOT", "CZ", "SWAP", "TOFF", ...). */
tsim_status tsim_correction_table_format(const char* gate, char** out);

/* Clifford hierarchy level of the gate, searched up to k_max (pass 0 for
 * the default of 4). *out_level is set to the level, or to -1 when the
 * gate sits above k_max. */
tsim_status tsim_clifford_level(const char* gate, int k_max, int* out_level);

/* A teleportation experiment: protocol, inputs, noise, sweeps. Build one
 * from config text (see the `sweep` CLI help for the format), or start
 * empty and feed single "key = value" lines through tsim_experiment_set. */
typedef struct tsim_experiment tsim_experiment;
typedef struct tsim_records tsim_records;

tsim_status tsim_experiment_new(tsim_experiment** out);
tsim_status tsim_experiment_parse(const char* text, tsim_experiment** out);
tsim_status tsim_experiment_load(const char* path, tsim_experiment** out);
tsim_status tsim_experiment_set(tsim_experiment* exp, const char* line);
tsim_status tsim_experiment_run(const tsim_experiment* exp, tsim_records** out);
void tsim_experiment_free(tsim_experiment* exp);

size_t tsim_records_size(const tsim_records* recs);
tsim_status tsim_records_fidelity(const tsim_records* recs, size_t index, double* out);
tsim_status tsim_records_branches(const tsim_records* recs, size_t index, size_t* out);
tsim_status tsim_records_mean_fidelity(const tsim_records* recs, double* out);
tsim_status tsim_records_write_csv(const tsim_records* recs, const char* path);
tsim_status tsim_records_write_plot(const tsim_records* recs, const char* path);
void tsim_records_free(tsim_records* recs);

/* Newline-separated list of built-in figure ids. */
tsim_status tsim_figure_list(char** out);

/* Regenerates one built-in figure into out_dir. mode_override may be NULL,
 * "exact" or "sampled". For the noise-comparison figure *comparison_flagged
 * (if non-NULL) reports whether the link/device ordering was violated and
 * the result marked parameterization-dependent. */
tsim_status tsim_reproduce(const char* figure_id, const char* out_dir,
                           const char* mode_override, int* comparison_flagged);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TELEPORTSIM_H_ */
