#ifndef QHANKEL_H
#define QHANKEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum QhStatus {
  QH_STATUS_OK = 0,
  QH_STATUS_DOMAIN = 1,
  QH_STATUS_POLE = 2,
  QH_STATUS_DIVERGENCE = 3,
  QH_STATUS_ILL_CONDITIONED = 4,
  QH_STATUS_CONVERGENCE = 5,
  QH_STATUS_DIMENSION_MISMATCH = 6,
  QH_STATUS_IO = 7,
  QH_STATUS_NULL_POINTER = 8,
  QH_STATUS_INDEX_OUT_OF_RANGE = 9,
  QH_STATUS_BUFFER_TOO_SMALL = 10,
  QH_STATUS_PANIC = 11,
} QhStatus;

/**
 * Opaque handle to a dense symmetric matrix truncation.
 */
typedef struct QhMatrix QhMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Weighted Hankel matrix `H(a,b)` on the Al-Salam--Chihara basis.
 */
enum QhStatus qh_build_asc(double a, double b, double q, size_t order, struct QhMatrix **out);

/**
 * Jacobi matrix `J(a,b)` commuting with `H(a,b)`.
 */
enum QhStatus qh_build_asc_jacobi(double a,
                                  double b,
                                  double q,
                                  size_t order,
                                  struct QhMatrix **out);

/**
 * Matrix `G(a;q)`.
 */
enum QhStatus qh_build_g(double a, double q, size_t order, struct QhMatrix **out);

/**
 * Matrix `H~(α;q)`.
 */
enum QhStatus qh_build_tilde_h(double alpha, double q, size_t order, struct QhMatrix **out);

/**
 * Quantum Hilbert matrix with entries `q^{ε(m+n)} / (1 - q^{m+n+ν})`.
 */
enum QhStatus qh_build_quantum_hilbert(double nu,
                                       double q,
                                       double eps,
                                       size_t order,
                                       struct QhMatrix **out);

/**
 * Matrix of entries `q^{m+n} / (1 - q^{m+n+1})`.
 */
enum QhStatus qh_build_gcal(double q, size_t order, struct QhMatrix **out);

/**
 * Jacobi matrix commuting with the `qh_build_gcal` matrix.
 */
enum QhStatus qh_build_jcal(double q, size_t order, struct QhMatrix **out);

/**
 * Generalised Hilbert matrix `1/(m+n+ν)`.
 */
enum QhStatus qh_build_hilbert(double nu, size_t order, struct QhMatrix **out);

/**
 * Matrix `B(a,b,c)`.
 */
enum QhStatus qh_build_b(double a, double b, double c, size_t order, struct QhMatrix **out);

/**
 * Releases a matrix; null is ignored.
 *
 * # Safety
 * `m` must be null or a handle from `qh_build_*` that has not been freed.
 */
void qh_matrix_free(struct QhMatrix *m);

/**
 * Order of the matrix, or 0 for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t qh_matrix_order(const struct QhMatrix *m);

/**
 * Entry `(row, col)`.
 *
 * # Safety
 * `m` must be null or a live handle; `out` must be null or writable.
 */
enum QhStatus qh_matrix_get(const struct QhMatrix *m, size_t row, size_t col, double *out);

/**
 * Copies all entries row-major into `buf`, which must hold `order²` values.
 *
 * # Safety
 * `m` must be null or a live handle; `buf` must be null or valid for `len` writes.
 */
enum QhStatus qh_matrix_copy(const struct QhMatrix *m, double *buf, size_t len);

/**
 * Eigenvalues in ascending order into `buf`, which must hold `order` values.
 *
 * # Safety
 * `m` must be null or a live handle; `buf` must be null or valid for `len` writes.
 */
enum QhStatus qh_matrix_eigenvalues(const struct QhMatrix *m, double *buf, size_t len);

/**
 * Largest `|(JM - MJ)_{m,n}|` over `m, n < order - margin`.
 *
 * # Safety
 * `j` and `m` must be null or live handles; `out` must be null or writable.
 */
enum QhStatus qh_commutator_interior_max(const struct QhMatrix *j,
                                         const struct QhMatrix *m,
                                         size_t margin,
                                         double *out);

/**
 * Multiplier of `H(a,b)` at `θ ∈ (0, π)`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum QhStatus qh_multiplier_h(double theta, double a, double b, double q, double *out);

/**
 * Multiplier of `G(a;q)` at `θ ∈ (0, π)`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum QhStatus qh_multiplier_g(double theta, double a, double q, double *out);

/**
 * Multiplier of `H~(α;q)` at `θ ∈ (0, π)`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum QhStatus qh_multiplier_tilde_h(double theta, double alpha, double q, double *out);

/**
 * Message of the last failed call on this thread (empty after success).
 * The pointer stays valid until the next call on the same thread.
 */
const char *qh_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *qh_status_name(enum QhStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHANKEL_H */
