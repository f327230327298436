#ifndef NICADIL_H
#define NICADIL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum NicadilStatus {
  NICADIL_STATUS_OK = 0,
  NICADIL_STATUS_NULL_POINTER = 1,
  NICADIL_STATUS_INVALID_UTF8 = 2,
  NICADIL_STATUS_PARSE = 3,
  NICADIL_STATUS_SHAPE_MISMATCH = 4,
  NICADIL_STATUS_INVALID_FACTOR = 5,
  NICADIL_STATUS_INDETERMINATE_SIGN = 6,
  NICADIL_STATUS_NOT_IN_MONOID = 7,
  NICADIL_STATUS_NORM_EXCEEDED = 8,
  NICADIL_STATUS_NON_COMMUTING = 9,
  NICADIL_STATUS_GRAM_NOT_PSD = 10,
  NICADIL_STATUS_CAP_EXCEEDED = 11,
  NICADIL_STATUS_NOT_IN_ALGEBRA = 12,
  NICADIL_STATUS_INVALID_ARGUMENT = 13,
  NICADIL_STATUS_SAMPLER_EXHAUSTED = 14,
  NICADIL_STATUS_NUMERICAL_ERROR = 15,
  NICADIL_STATUS_PANIC = 16,
} NicadilStatus;

/*
 Opaque dilation handle.
 */
typedef struct NicadilDilation NicadilDilation;

/*
 Opaque lattice handle.
 */
typedef struct NicadilLattice NicadilLattice;

/*
 Opaque representation handle.
 */
typedef struct NicadilRep NicadilRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Valid until the
 next call into this library on the same thread.
 */
const char *nicadil_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *nicadil_version(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void nicadil_string_free(char *s);

/*
 Runs a scenario given as JSON text. On success `*report` receives the
 report JSON (free with `nicadil_string_free`) and `*exit_code` the CLI exit
 code (0 pass, 1 failed verdict, 3 computation error). A malformed scenario
 returns `NICADIL_STATUS_PARSE`.

 # Safety
 `scenario_json` must be NUL-terminated; the out pointers must be valid.
 */
enum NicadilStatus nicadil_run_scenario(const char *scenario_json, char **report, int *exit_code);

/*
 `ℤ^k` with `k` cyclic factors generated by 1.

 # Safety
 `out` must be a valid pointer.
 */
enum NicadilStatus nicadil_lattice_integer_grid(size_t k, struct NicadilLattice **out);

/*
 Lattice from a JSON array of factors, e.g.
 `[{"kind":"cyclic"},{"kind":"real","generators":["1","1.414"]}]`.

 # Safety
 `factors_json` must be NUL-terminated and `out` valid.
 */
enum NicadilStatus nicadil_lattice_from_json(const char *factors_json, struct NicadilLattice **out);

/*
 Total number of generators, the length of a coefficient array.

 # Safety
 `lattice` must be a live handle or null.
 */
size_t nicadil_lattice_total_generators(const struct NicadilLattice *lattice);

/*
 # Safety
 `lattice` must come from this library and not be freed twice.
 */
void nicadil_lattice_free(struct NicadilLattice *lattice);

/*
 Representation from full-space generator matrices. `data` holds one
 `dim × dim` complex matrix per generator in factor order, row-major with
 interleaved real and imaginary parts (`2·dim²` doubles per generator).

 # Safety
 `data` must hold `2·dim²·total_generators` doubles; `out` must be valid.
 */
enum NicadilStatus nicadil_rep_new_direct(const struct NicadilLattice *lattice,
                                          size_t dim,
                                          const double *data,
                                          double tol,
                                          struct NicadilRep **out);

/*
 # Safety
 `rep` must be a live handle or null.
 */
size_t nicadil_rep_dim(const struct NicadilRep *rep);

/*
 # Safety
 `rep` must come from this library and not be freed twice.
 */
void nicadil_rep_free(struct NicadilRep *rep);

/*
 Smallest eigenvalue of the operator matrix `[T_{s_j − s_i}]` on
 `n_points` cone points given as consecutive coefficient arrays.

 # Safety
 `coeffs` must hold `n_points · total_generators` integers.
 */
enum NicadilStatus nicadil_kernel_min_eigenvalue(const struct NicadilRep *rep,
                                                 const int64_t *coeffs,
                                                 size_t n_points,
                                                 double *out);

/*
 Truncated minimal isometric dilation on the given support, which must
 contain 0.

 # Safety
 `coeffs` must hold `n_points · total_generators` integers; `out` valid.
 */
enum NicadilStatus nicadil_dilation_build(const struct NicadilRep *rep,
                                          const int64_t *coeffs,
                                          size_t n_points,
                                          struct NicadilDilation **out);

/*
 Dimension of the truncated dilation space.

 # Safety
 `dil` must be a live handle or null.
 */
size_t nicadil_dilation_rank(const struct NicadilDilation *dil);

/*
 `‖V_s*V_s − I‖` on the truncated space.

 # Safety
 `s` must hold `total_generators` integers; `out` must be valid.
 */
enum NicadilStatus nicadil_dilation_verify_isometry(const struct NicadilDilation *dil,
                                                    const int64_t *s,
                                                    double *out);

/*
 `‖P_H V_{g₋}* V_{g₊}|_H − T_g‖`.

 # Safety
 `g` must hold `total_generators` integers; `out` must be valid.
 */
enum NicadilStatus nicadil_dilation_verify_regularity(const struct NicadilDilation *dil,
                                                      const int64_t *g,
                                                      double *out);

/*
 Nica pairing defects for `s`, `t` in different factors. `*restricted` is
 NaN when `s ∧ μ ≠ 0`.

 # Safety
 Each element pointer must hold `total_generators` integers; the out
 pointers must be valid.
 */
enum NicadilStatus nicadil_dilation_verify_nica(const struct NicadilDilation *dil,
                                                const int64_t *s,
                                                const int64_t *t,
                                                const int64_t *mu,
                                                const int64_t *nu,
                                                double *full,
                                                double *restricted);

/*
 # Safety
 `dil` must come from this library and not be freed twice.
 */
void nicadil_dilation_free(struct NicadilDilation *dil);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NICADIL_H */
