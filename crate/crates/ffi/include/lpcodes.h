#ifndef LPCODES_H
#define LPCODES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

enum LpcStatus {
  LPC_STATUS_OK = 0,
  LPC_STATUS_NULL_POINTER = 1,
  LPC_STATUS_INVALID_INPUT = 2,
  LPC_STATUS_SINGULAR_MATRIX = 3,
  LPC_STATUS_UNSUPPORTED_DIMENSION = 4,
  LPC_STATUS_HYPOTHESIS_VIOLATED = 5,
  LPC_STATUS_OVERFLOW = 6,
  LPC_STATUS_LIMIT_EXCEEDED = 7,
  LPC_STATUS_OUT_OF_RANGE = 8,
  LPC_STATUS_PANIC = 9,
};
typedef int32_t LpcStatus;

// Analysis of one lattice code.
typedef struct LpcAnalysis LpcAnalysis;

// Result of an exhaustive search.
typedef struct LpcSearchReport LpcSearchReport;

// Message of the most recent failure on this thread, or NULL. Free it with
// [`lpc_string_free`].
char *lpc_last_error(void);

// # Safety
// `s` must come from this library and not have been freed yet.
void lpc_string_free(char *s);

// Analyzes the lattice spanned by the `dim` rows of the row-major
// `dim * dim` matrix `rows` under the ℓ_p metric.
//
// # Safety
// `rows` must point to `dim * dim` readable values and `out` must be writable.
LpcStatus lpc_analyze(const int64_t *rows, uintptr_t dim, uint32_t p, struct LpcAnalysis **out);

// # Safety
// `a` must come from this library and not have been freed yet.
void lpc_analysis_free(struct LpcAnalysis *a);

// Lattice dimension. Returns 0 for a NULL handle.
//
// # Safety
// `a` must be NULL or a live handle.
uintptr_t lpc_analysis_dim(const struct LpcAnalysis *a);

// Determinant, i.e. the code size. Returns 0 for a NULL handle.
//
// # Safety
// `a` must be NULL or a live handle.
uint64_t lpc_analysis_det(const struct LpcAnalysis *a);

// Packing radius raised to the p-th power. Returns 0 for a NULL handle.
//
// # Safety
// `a` must be NULL or a live handle.
uint64_t lpc_analysis_packing_pow(const struct LpcAnalysis *a);

// Covering radius raised to the p-th power. Returns 0 for a NULL handle.
//
// # Safety
// `a` must be NULL or a live handle.
uint64_t lpc_analysis_covering_pow(const struct LpcAnalysis *a);

// Number of distances strictly between the two radii. Returns 0 for a NULL handle.
//
// # Safety
// `a` must be NULL or a live handle.
uint64_t lpc_analysis_imperfection(const struct LpcAnalysis *a);

// Ball size at the packing radius. Returns 0 for a NULL handle.
//
// # Safety
// `a` must be NULL or a live handle.
uint64_t lpc_analysis_mu_packing(const struct LpcAnalysis *a);

// Ball size at the covering radius. Returns 0 for a NULL handle.
//
// # Safety
// `a` must be NULL or a live handle.
uint64_t lpc_analysis_mu_covering(const struct LpcAnalysis *a);

// Packing radius of the real ℓ_p polyomino tiling. Returns 0.0 for a NULL handle.
//
// # Safety
// `a` must be NULL or a live handle.
double lpc_analysis_real_pack_radius(const struct LpcAnalysis *a);

// Writes the HNF basis row-major into `rows_out`, which must hold `dim * dim` values.
//
// # Safety
// `a` must be a live handle; `rows_out` must be writable for `capacity` values.
LpcStatus lpc_analysis_basis(const struct LpcAnalysis *a, int64_t *rows_out, uintptr_t capacity);

// Full analysis as JSON; free the string with [`lpc_string_free`].
//
// # Safety
// `a` must be a live handle and `out` writable.
LpcStatus lpc_analysis_to_json(const struct LpcAnalysis *a, char **out);

// Number of integer points `x` with `Σ|x_i|^p <= s`, or 0 for invalid `dim`/`p`.
uint64_t lpc_mu(uintptr_t dim, uint32_t p, uint64_t s);

// Searches volumes `volume_min..=volume_max` for codes with `t <= t_max`.
//
// # Safety
// `out` must be writable.
LpcStatus lpc_search(uintptr_t dim,
                     uint32_t p,
                     uint64_t volume_min,
                     uint64_t volume_max,
                     uint64_t t_max,
                     bool dedupe,
                     struct LpcSearchReport **out);

// # Safety
// `r` must come from this library and not have been freed yet.
void lpc_search_free(struct LpcSearchReport *r);

// # Safety
// `r` must be NULL or a live handle.
uintptr_t lpc_search_hit_count(const struct LpcSearchReport *r);

// Copies the analysis of hit `index` into a new handle owned by the caller.
//
// # Safety
// `r` must be a live handle and `out` writable.
LpcStatus lpc_search_hit(const struct LpcSearchReport *r,
                         uintptr_t index,
                         struct LpcAnalysis **out);

// Whole report as JSON; free the string with [`lpc_string_free`].
//
// # Safety
// `r` must be a live handle and `out` writable.
LpcStatus lpc_search_to_json(const struct LpcSearchReport *r, char **out);

#endif  /* LPCODES_H */
