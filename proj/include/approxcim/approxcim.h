/* Copyright 2026 The approxcim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the approxcim toolkit.
 *
 * Every fallible call returns an acim_status. On failure the message is
 * available from acim_last_error() on the same thread until the next call.
 * Strings returned through char** are heap-allocated and must be released
 * with acim_string_free(). Handles are opaque; a handle may be read from
 * several threads but must not be mutated concurrently.
 */

#ifndef APPROXCIM_APPROXCIM_H
#define APPROXCIM_APPROXCIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ACIM_API __declspec(dllexport)
#else
#define ACIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum acim_status {
  ACIM_OK = 0,
  ACIM_ERR_INVALID_ARGUMENT = 1,
  ACIM_ERR_PARSE = 2,
  ACIM_ERR_IO = 3,
  ACIM_ERR_OUT_OF_RANGE = 4,
  ACIM_ERR_CONFIG = 5,
  ACIM_ERR_NOT_CONVERGED = 6,
  ACIM_ERR_UNSUPPORTED = 7,
  ACIM_ERR_INTERNAL = 8
} acim_status;

ACIM_API const char* acim_version(void);
ACIM_API int acim_schema_version(void);
ACIM_API const char* acim_last_error(void);
ACIM_API const char* acim_status_name(acim_status status);
ACIM_API void acim_string_free(char* s);

/* ---- multipliers ---- */

typedef enum acim_family {
  ACIM_FAMILY_EXACT = 0,
  ACIM_FAMILY_APPROX42 = 1,
  ACIM_FAMILY_LOG = 2
} acim_family;

typedef struct acim_multiplier_config {
  unsigned width;
  acim_family family;
  int sign_magnitude;     /* 0 unsigned, 1 sign-magnitude */
  int region;             /* approx4-2 only; -1 selects the default (width) */
  const char* compressor; /* approx4-2 only; builtin name or table path; NULL = "reference" */
  int compensation;       /* logarithmic only; -1 default (on), 0 off, 1 on */
} acim_multiplier_config;

typedef struct acim_multiplier acim_multiplier;

ACIM_API void acim_multiplier_config_init(acim_multiplier_config* cfg);
ACIM_API acim_status acim_parse_family(const char* name, acim_family* out);
ACIM_API acim_status acim_multiplier_create(const acim_multiplier_config* cfg,
                                            acim_multiplier** out);
ACIM_API void acim_multiplier_destroy(acim_multiplier* m);
ACIM_API unsigned acim_multiplier_width(const acim_multiplier* m);

ACIM_API acim_status acim_multiply(const acim_multiplier* m, uint64_t a, uint64_t b,
                                   uint64_t* out);
ACIM_API acim_status acim_multiply_signed(const acim_multiplier* m, int64_t a,
                                          int64_t b, int64_t* out);
ACIM_API acim_status acim_multiply_batch(const acim_multiplier* m, const uint64_t* a,
                                         const uint64_t* b, size_t count,
                                         uint64_t* out);

/* Gate-count CSV rows (with header). */
ACIM_API acim_status acim_gate_count_csv(const acim_multiplier* m, char** out);
/* Flat primitive-gate Verilog; logarithmic multipliers get the structural form. */
ACIM_API acim_status acim_emit_verilog(const acim_multiplier* m, const char* module_name,
                                       char** out);
ACIM_API acim_status acim_emit_testbench(const acim_multiplier* m, const char* module_name,
                                         const uint64_t* a, const uint64_t* b,
                                         size_t count, char** out);
/* 1 when the interpreted RTL of this multiplier matches its netlist on
 * `count` seeded random vectors. */
ACIM_API acim_status acim_check_rtl(const acim_multiplier* m, size_t count, uint64_t seed,
                                    int* matches);

/* ---- error metrics ---- */

typedef struct acim_error_report {
  uint64_t samples;
  double med;
  double nmed;
  double mred;
  uint64_t wce;
  double error_rate;
} acim_error_report;

/* exhaustive != 0 sweeps all pairs (width <= 10); otherwise `samples`
 * seeded uniform pairs. */
ACIM_API acim_status acim_sweep_errors(const acim_multiplier* m, int exhaustive,
                                       uint64_t samples, uint64_t seed,
                                       acim_error_report* out);
ACIM_API acim_status acim_error_report_csv(const acim_multiplier* m,
                                           const acim_error_report* report,
                                           int header, char** out);
ACIM_API acim_status acim_error_report_json(const acim_multiplier* m,
                                            const acim_error_report* report, char** out);

/* ---- images ---- */

typedef struct acim_image acim_image;

ACIM_API acim_status acim_image_read_pgm(const char* path, acim_image** out);
ACIM_API acim_status acim_image_write_pgm(const acim_image* img, const char* path);
ACIM_API acim_status acim_image_synthetic(const char* kind, unsigned width,
                                          unsigned height, acim_image** out);
ACIM_API void acim_image_destroy(acim_image* img);
ACIM_API unsigned acim_image_width(const acim_image* img);
ACIM_API unsigned acim_image_height(const acim_image* img);
ACIM_API const uint8_t* acim_image_pixels(const acim_image* img);

ACIM_API acim_status acim_blend(const acim_image* a, const acim_image* b,
                                const acim_multiplier* m, acim_image** out);
/* m == NULL selects exact arithmetic. */
ACIM_API acim_status acim_sobel(const acim_image* img, const acim_multiplier* m,
                                acim_image** out);
/* +INFINITY for identical images. */
ACIM_API acim_status acim_psnr(const acim_image* reference, const acim_image* test,
                               double* out);

/* ---- yield ---- */

typedef enum acim_yield_method { ACIM_YIELD_MC = 0, ACIM_YIELD_MNIS = 1 } acim_yield_method;

typedef struct acim_yield_params {
  const char* model; /* "linear" or "snm-surrogate" */
  double beta;
  unsigned dim;
  acim_yield_method method;
  double target_fom;
  uint64_t max_sims;
  uint64_t seed;
  uint64_t presamples;
  double sigma_s;
} acim_yield_params;

typedef struct acim_yield_result {
  acim_yield_method method;
  double pf;
  double std_dev;
  double fom; /* +INFINITY when pf == 0 */
  uint64_t sims;
  uint64_t seed;
  int converged;
} acim_yield_result;

ACIM_API void acim_yield_params_init(acim_yield_params* p);
ACIM_API acim_status acim_yield_run(const acim_yield_params* p, acim_yield_result* out);
ACIM_API acim_status acim_yield_result_csv(const acim_yield_params* p,
                                           const acim_yield_result* r, int header,
                                           char** out);
/* Method comparison CSV (method,pf,fom,sims,speedup), medians over seeds. */
ACIM_API acim_status acim_yield_compare(const acim_yield_params* p, const uint64_t* seeds,
                                        size_t seed_count, char** out);

/* ---- SRAM ---- */

typedef struct acim_sram_config {
  unsigned rows;
  unsigned cols;
  unsigned word_width;
  unsigned banks;
  unsigned subarrays;
  unsigned mux_ratio;
  unsigned sae_offset;
  unsigned precharge;
} acim_sram_config;

typedef struct acim_sram acim_sram;

ACIM_API void acim_sram_config_init(acim_sram_config* cfg);
ACIM_API acim_status acim_sram_create(const acim_sram_config* cfg, acim_sram** out);
ACIM_API void acim_sram_destroy(acim_sram* s);
ACIM_API uint64_t acim_sram_capacity(const acim_sram* s);
ACIM_API acim_status acim_sram_write(acim_sram* s, uint64_t addr, uint64_t word);
ACIM_API acim_status acim_sram_read(acim_sram* s, uint64_t addr, uint64_t* out);
ACIM_API acim_status acim_sram_pe_cycle(acim_sram* s, uint64_t addr, uint64_t operand,
                                        const acim_multiplier* m, uint64_t* out);
ACIM_API void acim_sram_enable_trace(acim_sram* s, int on);
ACIM_API acim_status acim_sram_trace_csv(const acim_sram* s, char** out);
/* macro_name NULL selects the default "sram_<words>x<width>". */
ACIM_API acim_status acim_sram_views(const acim_sram_config* cfg, const char* macro_name,
                                     char** lef, char** lib);

/* ---- projects ---- */

typedef struct acim_project acim_project;

/* overrides: `count` pairs of "table.key" and a value in config syntax. */
ACIM_API acim_status acim_project_load(const char* path, const char* const* keys,
                                       const char* const* values, size_t count,
                                       acim_project** out);
ACIM_API acim_status acim_project_parse(const char* text, const char* base_dir,
                                        const char* const* keys,
                                        const char* const* values, size_t count,
                                        acim_project** out);
ACIM_API void acim_project_destroy(acim_project* p);
/* Empty string when the config does not set an output directory. */
ACIM_API const char* acim_project_output_dir(const acim_project* p);
ACIM_API uint64_t acim_project_seed(const acim_project* p);
/* Writes the artifact set; on failure a FAILED marker is left in out_dir. */
ACIM_API acim_status acim_project_generate(const acim_project* p, const char* out_dir,
                                           char** file_list);
ACIM_API void acim_write_failure_marker(const char* out_dir, const char* message);

#ifdef __cplusplus
}
#endif

#endif /* APPROXCIM_APPROXCIM_H */
