/*
 Copyright 2026 The flipopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

/* C interface to the flip-manoeuvre trajectory optimizer.
 *
 * Every function returns a flipopt_status. On anything other than FLIPOPT_OK
 * the message is available from flipopt_last_error() on the same thread.
 * Handles are opaque and must be released with the matching *_free call.
 * Strings returned through char** are owned by the caller (flipopt_string_free).
 */
#ifndef FLIPOPT_H
#define FLIPOPT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FLIPOPT_API __declspec(dllexport)
#else
#define FLIPOPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum flipopt_status {
    FLIPOPT_OK = 0,
    FLIPOPT_TOLERANCE = 1, /* a check ran but missed its tolerance */
    FLIPOPT_CONFIG = 2,    /* invalid scenario, arguments or input file */
    FLIPOPT_NUMERIC = 3,   /* non-finite value during simulation, training or optimization */
    FLIPOPT_IO = 4,
    FLIPOPT_INVALID_ARG = 5, /* null handle or pointer */
    FLIPOPT_INTERNAL = 6
} flipopt_status;

typedef enum flipopt_engine {
    FLIPOPT_ENGINE_BPTT = 0,
    FLIPOPT_ENGINE_ADJOINT = 1
} flipopt_engine;

typedef struct flipopt_scenario flipopt_scenario;
typedef struct flipopt_run flipopt_run;

/* Called after every optimizer step. */
typedef void (*flipopt_progress_fn)(int step, double lr, double loss, void* user);

FLIPOPT_API const char* flipopt_version(void);
FLIPOPT_API const char* flipopt_last_error(void);
FLIPOPT_API const char* flipopt_status_name(flipopt_status status);
FLIPOPT_API void flipopt_string_free(char* s);

/* ---- scenarios ---- */

/* Preset name ("case1", "case2") or path to a scenario JSON file. */
FLIPOPT_API flipopt_status flipopt_scenario_load(const char* path_or_preset, flipopt_scenario** out);
/* `base_dir` resolves relative weight paths; may be NULL. */
FLIPOPT_API flipopt_status flipopt_scenario_from_json(const char* json, const char* base_dir,
                                                      flipopt_scenario** out);
FLIPOPT_API flipopt_status flipopt_scenario_to_json(const flipopt_scenario* scn, char** out_json);
FLIPOPT_API void flipopt_scenario_free(flipopt_scenario* scn);

/* Changes K keeping dt, so the horizon scales with K. */
FLIPOPT_API flipopt_status flipopt_scenario_set_steps(flipopt_scenario* scn, int steps);
FLIPOPT_API flipopt_status flipopt_scenario_set_engine(flipopt_scenario* scn, flipopt_engine engine);
FLIPOPT_API flipopt_status flipopt_scenario_set_seed(flipopt_scenario* scn, uint64_t seed);
FLIPOPT_API flipopt_status flipopt_scenario_set_iterations(flipopt_scenario* scn, int n_steps);
FLIPOPT_API int flipopt_scenario_steps(const flipopt_scenario* scn);
FLIPOPT_API uint64_t flipopt_scenario_seed(const flipopt_scenario* scn);

/* ---- optimize / simulate ---- */

typedef struct flipopt_residuals {
    double position_error_m;
    double velocity_error_mps;
    double speed_error_mps;
    double pitch_error_deg;
    double omega_radps;
    double min_mass_kg;
    double flip_y_over_L; /* y / L_ref where |omega| peaks */
    double flip_time_s;
} flipopt_residuals;

typedef struct flipopt_run_summary {
    flipopt_residuals residuals;
    int residuals_finite;
    double loss;
    int best_step; /* -1 for simulate */
    int iterations;
    int saturated_params;
    double wall_seconds;
    int steps;
} flipopt_run_summary;

/* `out_dir` may be NULL to skip writing artefacts. argv is recorded in the
 * manifest and may be NULL when argc is 0. `out_run` may be NULL. */
FLIPOPT_API flipopt_status flipopt_optimize(const flipopt_scenario* scn, const char* out_dir,
                                            int argc, const char* const* argv,
                                            flipopt_progress_fn progress, void* user,
                                            flipopt_run** out_run);
FLIPOPT_API flipopt_status flipopt_simulate(const flipopt_scenario* scn, const char* controls_csv,
                                            int no_aero, const char* out_dir, int argc,
                                            const char* const* argv, flipopt_run** out_run);

FLIPOPT_API flipopt_status flipopt_run_summary_get(const flipopt_run* run, flipopt_run_summary* out);
FLIPOPT_API const char* flipopt_run_engine(const flipopt_run* run);
/* Row k of the trajectory in SI units, k in [0, K]:
 * x_m, y_m, theta_deg, u_mps, v_mps, omega_radps, mass_kg, delta_d_deg. */
FLIPOPT_API flipopt_status flipopt_run_state(const flipopt_run* run, int k, double out[8]);
/* Command k in [0, K): thrust_N, delta_deg. */
FLIPOPT_API flipopt_status flipopt_run_control(const flipopt_run* run, int k, double out[2]);
FLIPOPT_API void flipopt_run_free(flipopt_run* run);

/* ---- surrogate training ---- */

typedef struct flipopt_fit_report {
    int samples;
    int epochs;
    double mse;
    double max_abs_error[3]; /* C_L, C_D, C_M */
} flipopt_fit_report;

FLIPOPT_API flipopt_status flipopt_train_aero(int samples, uint64_t seed, const char* weights_out,
                                              int argc, const char* const* argv,
                                              flipopt_fit_report* out);

/* ---- gradient checks ---- */

typedef struct flipopt_grad_check {
    double max_rel_error;
    double max_abs_error;
    int worst_index; /* [0, K) thrust, [K, 2K) gimbal */
    double worst_value;
    double worst_reference;
    double loss;
    double engine_seconds;
    double fd_seconds;
} flipopt_grad_check;

/* FLIPOPT_TOLERANCE when the comparison fails. corrupt_index >= 0 perturbs one
 * entry of the engine gradient (test hook); pass -1 otherwise. */
FLIPOPT_API flipopt_status flipopt_check_grad(const flipopt_scenario* scn, flipopt_engine engine,
                                              uint64_t seed, int corrupt_index, const char* out_dir,
                                              int argc, const char* const* argv,
                                              flipopt_grad_check* out);

typedef struct flipopt_engine_comparison {
    double gradient_mae;
    double controls_mae;
    double trajectory_mae;
    double tolerance;
    double loss_a, loss_b;
    size_t peak_aux_bytes_a, peak_aux_bytes_b;
    double optimize_seconds_a, optimize_seconds_b;
} flipopt_engine_comparison;

/* FLIPOPT_TOLERANCE when any MAE reaches the tolerance; the report is written first. */
FLIPOPT_API flipopt_status flipopt_compare_engines(const flipopt_scenario* scn, flipopt_engine a,
                                                   flipopt_engine b, const char* out_dir, int argc,
                                                   const char* const* argv,
                                                   flipopt_progress_fn progress, void* user,
                                                   flipopt_engine_comparison* out);

/* ---- plots, replay, hashing ---- */

typedef struct flipopt_plot_report {
    int n_files;
    double flip_y_over_L;
    double flip_time_s;
    double peak_reduced_frequency;
} flipopt_plot_report;

FLIPOPT_API flipopt_status flipopt_plot(const char* run_dir, flipopt_plot_report* out);

/* Re-runs a manifest into out_dir. FLIPOPT_TOLERANCE when a CSV differs.
 * `mismatches` (may be NULL) receives a newline-separated list of differing files. */
FLIPOPT_API flipopt_status flipopt_replay(const char* manifest_path, const char* out_dir, int argc,
                                          const char* const* argv, int* n_checked,
                                          char** mismatches);

FLIPOPT_API flipopt_status flipopt_hash_file(const char* path, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* FLIPOPT_H */
