#ifndef AGORA_H
#define AGORA_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result code of every fallible call.
 */
typedef enum AgoraStatus {
  AGORA_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  AGORA_STATUS_NULL_POINTER = 1,
  /*
   A string argument was not valid UTF-8.
   */
  AGORA_STATUS_INVALID_UTF8 = 2,
  /*
   A numeric argument violated its documented range.
   */
  AGORA_STATUS_OUT_OF_RANGE = 3,
  /*
   The configuration failed to parse or validate.
   */
  AGORA_STATUS_INVALID_CONFIG = 4,
  /*
   Malformed points, labels, hyperparameters or dimensions.
   */
  AGORA_STATUS_INVALID_DATA = 5,
  /*
   File or serialization failure.
   */
  AGORA_STATUS_IO = 6,
  /*
   The run failed after validation.
   */
  AGORA_STATUS_RUNTIME = 7,
  /*
   A caller-supplied buffer is too small.
   */
  AGORA_STATUS_BUFFER_TOO_SMALL = 8,
  /*
   The requested value does not exist for this object.
   */
  AGORA_STATUS_UNAVAILABLE = 9,
  /*
   The library panicked; the message holds the panic payload.
   */
  AGORA_STATUS_PANIC = 10,
} AgoraStatus;

/*
 A labeled point set.
 */
typedef struct AgoraDataset AgoraDataset;

/*
 A manifold description (shape, size, ambient dimension, label split).
 */
typedef struct AgoraManifold AgoraManifold;

/*
 The outcome of one experiment: loop trace, baseline and summary.
 */
typedef struct AgoraRun AgoraRun;

/*
 Step-count bound split into its terms.
 */
typedef struct AgoraRuntimePrediction {
  double total_steps_bound;
  double train_term;
  double select_term;
  double socrates_term;
} AgoraRuntimePrediction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null if none. The
 pointer stays valid until the next failing call on the same thread.
 */
const char *agora_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *agora_version(void);

/*
 # Safety
 `s` must come from this library and not have been freed.
 */
void agora_string_free(char *s);

/*
 Circle of `radius` in the plane, or embedded in `ambient_dim` dimensions
 when non-zero.

 # Safety
 `out_manifold` must be a valid pointer.
 */
enum AgoraStatus agora_manifold_circle(double radius,
                                       size_t ambient_dim,
                                       struct AgoraManifold **out_manifold);

/*
 2-sphere of `radius`; `ambient_dim` as for [`agora_manifold_circle`].

 # Safety
 `out_manifold` must be a valid pointer.
 */
enum AgoraStatus agora_manifold_sphere(double radius,
                                       size_t ambient_dim,
                                       struct AgoraManifold **out_manifold);

/*
 Segment `[0, length]`; `ambient_dim` as for [`agora_manifold_circle`].

 # Safety
 `out_manifold` must be a valid pointer.
 */
enum AgoraStatus agora_manifold_segment(double length,
                                        size_t ambient_dim,
                                        struct AgoraManifold **out_manifold);

/*
 Dimension of the points a manifold produces.

 # Safety
 `manifold` must be a live handle or null.
 */
size_t agora_manifold_ambient_dim(const struct AgoraManifold *manifold);

/*
 # Safety
 `manifold` must come from this library and not have been freed.
 */
void agora_manifold_free(struct AgoraManifold *manifold);

/*
 Covering-count factor β(ρ).

 # Safety
 `manifold` and `out_value` must be valid pointers.
 */
enum AgoraStatus agora_beta(const struct AgoraManifold *manifold, double rho, double *out_value);

/*
 Sample size that covers the manifold at radius ρ/2 with probability 1 − δ.

 # Safety
 `manifold` and `out_value` must be valid pointers.
 */
enum AgoraStatus agora_niyogi_smale_n(const struct AgoraManifold *manifold,
                                      double rho,
                                      double delta,
                                      uint64_t *out_value);

/*
 # Safety
 `out_value` must be a valid pointer.
 */
enum AgoraStatus agora_lambda_rho(double rho, double mu, double *out_value);

/*
 Representativeness level reachable at ρ.

 # Safety
 `manifold` and `out_value` must be valid pointers.
 */
enum AgoraStatus agora_epsilon_bound(const struct AgoraManifold *manifold,
                                     double rho,
                                     double *out_value);

/*
 Capacity level (natural log) at ρ.

 # Safety
 `manifold` and `out_value` must be valid pointers.
 */
enum AgoraStatus agora_d_bound(const struct AgoraManifold *manifold, double rho, double *out_value);

/*
 # Safety
 `out_value` must be a valid pointer.
 */
enum AgoraStatus agora_hanneke_n(double d,
                                 double epsilon,
                                 double delta,
                                 double c,
                                 uint64_t *out_value);

/*
 Number of perturbation rounds needed to cover the support.

 # Safety
 `out_value` must be a valid pointer.
 */
enum AgoraStatus agora_kappa_bound(uint64_t support_size,
                                   uint64_t extra_size,
                                   double c_frac,
                                   uint64_t e_size,
                                   double delta,
                                   uint64_t *out_value);

/*
 # Safety
 `out_value` must be a valid pointer.
 */
enum AgoraStatus agora_per_iteration_floor(uint32_t k, double *out_value);

/*
 # Safety
 `out_lower` and `out_upper` must be valid pointers.
 */
enum AgoraStatus agora_approx_ratio_bound(uint32_t theta_count,
                                          double *out_lower,
                                          double *out_upper);

/*
 Counting bound with a linear training cost `T_f(n) = t_f_scale · n`.

 # Safety
 `out_prediction` must be a valid pointer.
 */
enum AgoraStatus agora_runtime_bound_poly(uint64_t theta_count,
                                          uint64_t theta_size,
                                          uint64_t d_size,
                                          uint64_t e_size,
                                          double s_bar,
                                          double t_f_scale,
                                          struct AgoraRuntimePrediction *out_prediction);

/*
 Counting bound with the shuffling-SGD training cost.

 # Safety
 `out_prediction` must be a valid pointer.
 */
enum AgoraStatus agora_runtime_bound_sgd(uint64_t theta_count,
                                         uint64_t theta_size,
                                         uint64_t e_size,
                                         double s_bar,
                                         double f_bar,
                                         uint64_t batch_max,
                                         double lipschitz,
                                         double grad_bound,
                                         double zeta,
                                         struct AgoraRuntimePrediction *out_prediction);

/*
 Every geometric bound for `(manifold, ρ, δ)` as one JSON object, with the
 perturbation-round defaults (`c = 0.5`, no extra points).

 # Safety
 `manifold` and `out_json` must be valid pointers.
 */
enum AgoraStatus agora_bounds_report_json(const struct AgoraManifold *manifold,
                                          double rho,
                                          double delta,
                                          char **out_json);

/*
 `n` labeled points drawn uniformly from the manifold.

 # Safety
 `manifold` and `out_dataset` must be valid pointers.
 */
enum AgoraStatus agora_sample_manifold(const struct AgoraManifold *manifold,
                                       size_t n,
                                       uint64_t seed,
                                       struct AgoraDataset **out_dataset);

/*
 # Safety
 `path` must be a NUL-terminated string and `out_dataset` a valid pointer.
 */
enum AgoraStatus agora_dataset_load_csv(const char *path, struct AgoraDataset **out_dataset);

/*
 # Safety
 `dataset` must be a live handle and `path` a NUL-terminated string.
 */
enum AgoraStatus agora_dataset_save_csv(const struct AgoraDataset *dataset, const char *path);

/*
 Number of points, or 0 for a null handle.

 # Safety
 `dataset` must be a live handle or null.
 */
size_t agora_dataset_len(const struct AgoraDataset *dataset);

/*
 Point dimension, or 0 for a null handle.

 # Safety
 `dataset` must be a live handle or null.
 */
size_t agora_dataset_dim(const struct AgoraDataset *dataset);

/*
 Copies point `index` into `coords` (room for `coords_len` values) and its
 label into `out_label`.

 # Safety
 `coords` must have room for `coords_len` doubles; other pointers valid.
 */
enum AgoraStatus agora_dataset_point(const struct AgoraDataset *dataset,
                                     size_t index,
                                     double *coords,
                                     size_t coords_len,
                                     uint8_t *out_label);

/*
 # Safety
 `dataset` must come from this library and not have been freed.
 */
void agora_dataset_free(struct AgoraDataset *dataset);

/*
 Whether every point of a `mesh_n` mesh of the manifold lies within
 `radius` of some point of `points` (`count` points of `dim` coordinates,
 row-major). Writes the uncovered mesh fraction too when
 `out_uncovered_fraction` is non-null.

 # Safety
 `points` must hold `count * dim` doubles; other pointers valid or null
 where allowed.
 */
enum AgoraStatus agora_cover_check(const struct AgoraManifold *manifold,
                                   const double *points,
                                   size_t count,
                                   size_t dim,
                                   double radius,
                                   size_t mesh_n,
                                   bool *out_covered,
                                   double *out_uncovered_fraction);

/*
 Runs the loop and the enumeration baseline from a JSON configuration.
 `seed` replaces the configured master seed when `override_seed` is true;
 `workers` of 0 means the configured or environment default.

 # Safety
 `config_json` must be a NUL-terminated string and `out_run` valid.
 */
enum AgoraStatus agora_run_from_config_json(const char *config_json,
                                            bool override_seed,
                                            uint64_t seed,
                                            size_t workers,
                                            struct AgoraRun **out_run);

/*
 # Safety
 `run` and `out_value` must be valid pointers.
 */
enum AgoraStatus agora_run_best_accuracy(const struct AgoraRun *run, double *out_value);

/*
 # Safety
 `run` and `out_value` must be valid pointers.
 */
enum AgoraStatus agora_run_baseline_accuracy(const struct AgoraRun *run, double *out_value);

/*
 Loop accuracy over baseline accuracy; `Unavailable` when the baseline
 scored 0.

 # Safety
 `run` and `out_value` must be valid pointers.
 */
enum AgoraStatus agora_run_ratio(const struct AgoraRun *run, double *out_value);

/*
 Number of loop iterations, or 0 for a null handle.

 # Safety
 `run` must be a live handle or null.
 */
size_t agora_run_iterations(const struct AgoraRun *run);

/*
 The per-iteration trace in CSV form.

 # Safety
 `run` and `out_csv` must be valid pointers.
 */
enum AgoraStatus agora_run_trace_csv(const struct AgoraRun *run, char **out_csv);

/*
 The run summary as pretty-printed JSON.

 # Safety
 `run` and `out_json` must be valid pointers.
 */
enum AgoraStatus agora_run_summary_json(const struct AgoraRun *run, char **out_json);

/*
 # Safety
 `run` must come from this library and not have been freed.
 */
void agora_run_free(struct AgoraRun *run);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AGORA_H */
