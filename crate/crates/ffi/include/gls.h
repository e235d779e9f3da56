#ifndef GLS_H
#define GLS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GlsStatus {
  GLS_STATUS_OK = 0,
  GLS_STATUS_NULL_POINTER = 1,
  GLS_STATUS_INVALID_PARAMETER = 2,
  GLS_STATUS_EMPTY_DOMAIN = 3,
  GLS_STATUS_BELOW_VALIDITY = 4,
  GLS_STATUS_CONSTRAINT_VIOLATION = 5,
  GLS_STATUS_PARSE_ERROR = 6,
  GLS_STATUS_ARITY_MISMATCH = 7,
  GLS_STATUS_OTHER = 8,
  GLS_STATUS_PANIC = 9,
} GlsStatus;

/**
 * Opaque moment table.
 */
typedef struct GlsMomentTable GlsMomentTable;

/**
 * Opaque generating function.
 */
typedef struct GlsPsi GlsPsi;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the latest failure on this thread; empty after a success.
 * The pointer stays valid until the next `gls_*` call on the same thread.
 */
const char *gls_last_error_message(void);

/**
 * `beta * p^gamma` on `[1, inf)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GlsStatus gls_psi_power(double beta, double gamma, struct GlsPsi **out);

/**
 * `beta * p^gamma / (p - 1)^delta`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GlsStatus gls_psi_rational_factor(double beta,
                                       double gamma,
                                       double delta,
                                       struct GlsPsi **out);

/**
 * `scale * (p - a)^(-c) * (b - p)^(-s)` on `(a, b)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GlsStatus gls_psi_window(double scale,
                              double a,
                              double b,
                              double c,
                              double s,
                              struct GlsPsi **out);

/**
 * 1 at `p = r`, infinite elsewhere.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GlsStatus gls_psi_degenerate(double r, struct GlsPsi **out);

/**
 * Natural function of a moment table (the table is copied).
 *
 * # Safety
 * `table` and `out` must be valid pointers.
 */
enum GlsStatus gls_psi_natural(const struct GlsMomentTable *table, struct GlsPsi **out);

/**
 * # Safety
 * `a`, `b` and `out` must be valid pointers.
 */
enum GlsStatus gls_psi_product(const struct GlsPsi *a, const struct GlsPsi *b, struct GlsPsi **out);

/**
 * # Safety
 * `a` and `out` must be valid pointers.
 */
enum GlsStatus gls_psi_scaled(double c, const struct GlsPsi *a, struct GlsPsi **out);

/**
 * # Safety
 * `psi` must come from a `gls_*` constructor and not be freed twice.
 */
void gls_psi_free(struct GlsPsi *psi);

/**
 * `psi(p)`: `INFINITY` off the domain, `NaN` for a null handle.
 *
 * # Safety
 * `psi` must be a valid handle or null.
 */
double gls_psi_eval(const struct GlsPsi *psi, double p);

/**
 * Domain endpoints and closedness flags.
 *
 * # Safety
 * All pointers must be valid.
 */
enum GlsStatus gls_psi_domain(const struct GlsPsi *psi,
                              double *lower,
                              double *upper,
                              bool *lower_closed,
                              bool *upper_closed);

/**
 * Builds a table from parallel arrays of exponents and moments.
 *
 * # Safety
 * `ps` and `moments` must point to `len` doubles; `out` must be valid.
 */
enum GlsStatus gls_moments_new(const double *ps,
                               const double *moments,
                               size_t len,
                               struct GlsMomentTable **out);

/**
 * Parses `glsmoments v1` text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid.
 */
enum GlsStatus gls_moments_parse(const char *text, struct GlsMomentTable **out);

/**
 * # Safety
 * `table` must come from a `gls_moments_*` constructor and not be freed twice.
 */
void gls_moments_free(struct GlsMomentTable *table);

/**
 * GLS norm `sup_p moment(p) / psi(p)` over the table.
 *
 * # Safety
 * All pointers must be valid.
 */
enum GlsStatus gls_norm(const struct GlsMomentTable *table, const struct GlsPsi *psi, double *out);

/**
 * `h*(v)`; `value` is `INFINITY` and `argmax` `NaN` when it diverges.
 *
 * # Safety
 * All pointers must be valid.
 */
enum GlsStatus gls_fenchel_conjugate(const struct GlsPsi *psi,
                                     double v,
                                     double *value,
                                     double *argmax);

/**
 * # Safety
 * All pointers must be valid.
 */
enum GlsStatus gls_tail_bound(const struct GlsPsi *psi, double norm, double y, double *out);

/**
 * # Safety
 * `out` must be valid.
 */
enum GlsStatus gls_power_tail_closed_form(double gamma, double k, double y, double *out);

/**
 * # Safety
 * All out pointers must be valid.
 */
enum GlsStatus gls_holder_split_min(double g1,
                                    double g2,
                                    double *value,
                                    double *alpha,
                                    double *beta);

/**
 * # Safety
 * All out pointers must be valid.
 */
enum GlsStatus gls_conjugate_split_min(double g1,
                                       double g2,
                                       double p,
                                       double *value,
                                       double *p1,
                                       double *p2);

/**
 * # Safety
 * All out pointers must be valid.
 */
enum GlsStatus gls_beckner_constant(uint32_t n, double p1, double p2, double *r, double *g);

/**
 * # Safety
 * All pointers must be valid.
 */
enum GlsStatus gls_combine_product(const struct GlsPsi *a,
                                   const struct GlsPsi *b,
                                   struct GlsPsi **out);

/**
 * # Safety
 * All pointers must be valid.
 */
enum GlsStatus gls_combine_tensor(const struct GlsPsi *a,
                                  const struct GlsPsi *b,
                                  struct GlsPsi **out);

/**
 * # Safety
 * All pointers must be valid.
 */
enum GlsStatus gls_combine_convolution(const struct GlsPsi *a,
                                       const struct GlsPsi *b,
                                       uint32_t n,
                                       struct GlsPsi **out);

/**
 * Writes the `m^(d/p)` bound to `out` and the relaxed constant `m^d`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum GlsStatus gls_combine_infimal_convolution(const struct GlsPsi *psi,
                                               uint32_t d,
                                               uint32_t m,
                                               struct GlsPsi **out,
                                               double *relaxed);

/**
 * # Safety
 * `out` must be valid.
 */
enum GlsStatus gls_combine_maximal(double gamma, uint32_t d, double c_env, struct GlsPsi **out);

/**
 * # Safety
 * `out` must be valid.
 */
enum GlsStatus gls_combine_hausdorff(double gamma, uint32_t m, double c_env, struct GlsPsi **out);

/**
 * # Safety
 * `out` must be valid.
 */
enum GlsStatus gls_combine_toeplitz(double g1, double g2, struct GlsPsi **out);

/**
 * Whether `p` lies in the domain where `psi` is finite.
 *
 * # Safety
 * `psi` must be a valid handle or null.
 */
bool gls_psi_is_finite_at(const struct GlsPsi *psi, double p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GLS_H */
