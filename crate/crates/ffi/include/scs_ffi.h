#ifndef SCS_FFI_H
#define SCS_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScsMassSign {
  SCS_MASS_SIGN_MANIFEST = 0,
  SCS_MASS_SIGN_BROKEN = 1,
} ScsMassSign;

typedef enum ScsStatus {
  SCS_STATUS_OK = 0,
  SCS_STATUS_NULL_POINTER = 1,
  SCS_STATUS_INVALID_PARAMETER = 2,
  // Input outside the domain of a formula (off shell, factorization or boost domain).
  SCS_STATUS_DOMAIN = 3,
  // Divergence, NaN or solver breakdown.
  SCS_STATUS_NUMERICAL = 4,
  SCS_STATUS_BUFFER_TOO_SMALL = 5,
  SCS_STATUS_PANIC = 6,
  SCS_STATUS_OTHER = 7,
} ScsStatus;

// Opaque evolver handle.
typedef struct ScsEvolver ScsEvolver;

typedef struct ScsDiagnostics {
  uint64_t step;
  double t;
  double energy;
  double charge;
  double max_abs;
  double efield_norm;
} ScsDiagnostics;

typedef struct ScsFactorization {
  double eta;
  double zeta;
  double phi_mag;
  double beta;
} ScsFactorization;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the last error message of this thread into `buf` as a NUL-terminated
// string. Returns the buffer size needed including the terminator; nothing is
// written when `buf` is null or `len` is too small.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t scs_last_error_message(char *buf, size_t len);

// Create an evolver for the pairing field on `nx` points.
//
// `re`, `im`, `vre`, `vim` hold the initial field and its time derivative.
// With `periodic` nonzero the boundary is periodic, otherwise the ghost
// points are pinned to `left` and `right` (given as re/im pairs).
//
// # Safety
// The four input arrays must each hold `nx` doubles; `left` and `right` must
// point to two doubles when `periodic` is zero; `out` must be writable.
enum ScsStatus scs_evolver_new(size_t nx,
                               double dx,
                               double dt,
                               double m_delta,
                               double g_delta,
                               enum ScsMassSign sign,
                               int32_t periodic,
                               const double *left,
                               const double *right,
                               const double *re,
                               const double *im,
                               const double *vre,
                               const double *vim,
                               struct ScsEvolver **out);

// Advance `steps` time steps.
//
// # Safety
// `h` must be a live handle from [`scs_evolver_new`].
enum ScsStatus scs_evolver_step(struct ScsEvolver *h, uint64_t steps);

// # Safety
// `h` must be a live handle; `out` must be writable.
enum ScsStatus scs_evolver_diagnostics(const struct ScsEvolver *h, struct ScsDiagnostics *out);

// Copy the current field into `re` and `im`, each of capacity `len`.
//
// # Safety
// `h` must be a live handle; `re` and `im` must hold `len` writable doubles.
enum ScsStatus scs_evolver_field(const struct ScsEvolver *h, double *re, double *im, size_t len);

// Release a handle. Null is ignored.
//
// # Safety
// `h` must be null or a handle not yet freed.
void scs_evolver_free(struct ScsEvolver *h);

// Real energy roots of the in-medium dispersion relation at momentum `p`,
// sorted ascending. `count` receives the number of roots; when it exceeds
// `cap` nothing is written to `roots` and `BufferTooSmall` is returned.
//
// # Safety
// `roots` must hold `cap` writable doubles (may be null when `cap` is 0);
// `count` must be writable.
enum ScsStatus scs_dispersion_roots(double p,
                                    double mu,
                                    double sigma,
                                    double m,
                                    double re_delta,
                                    double im_delta,
                                    double *roots,
                                    size_t cap,
                                    size_t *count);

// Spin-charge factorization of the dressed boost.
//
// # Safety
// `out` must be writable.
enum ScsStatus scs_factorize(double e_plus,
                             double e_minus,
                             double re_delta_bar,
                             double im_delta_bar,
                             struct ScsFactorization *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCS_FFI_H */
