#ifndef CIRCLE_CS_H
#define CIRCLE_CS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Status codes. The non-zero values match the command-line exit codes
// where the meaning overlaps.
typedef enum CcsStatus {
  CCS_STATUS_OK = 0,
  CCS_STATUS_NULL_POINTER = 1,
  CCS_STATUS_DOMAIN = 2,
  CCS_STATUS_TOLERANCE = 3,
  CCS_STATUS_IO = 4,
  CCS_STATUS_PANIC = 5,
} CcsStatus;

// Result of a resolution-of-unity check.
typedef struct CcsResolutionReport CcsResolutionReport;

// Uniformly sampled wave function.
typedef struct CcsWaveFunction CcsWaveFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL
// terminated, truncated to `len` bytes) and returns the full message
// length excluding the terminator. `buf` may be null to query the length.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t ccs_last_error_message(char *buf, size_t len);

// Normalization constant of the wrapped Gaussian states.
double ccs_normalization_constant(void);

// erf(re + i·im) inside the certified box |re|, |im| ≤ 12.
//
// # Safety
// `out_re` and `out_im` must be valid for writes.
enum CcsStatus ccs_erf(double re, double im, double *out_re, double *out_im);

// Value of the coherent state |m, alpha⟩ at phi.
//
// # Safety
// `out_re` and `out_im` must be valid for writes.
enum CcsStatus ccs_coherent_eval(int64_t m,
                                 double alpha,
                                 double phi,
                                 double *out_re,
                                 double *out_im);

// ⟨m, alpha | n, beta⟩ from the closed forms. `out_err_est` may be null.
//
// # Safety
// `out_re` and `out_im` must be valid for writes; `out_err_est` must be
// null or valid for writes.
enum CcsStatus ccs_overlap(int64_t m,
                           double alpha,
                           int64_t n,
                           double beta,
                           double *out_re,
                           double *out_im,
                           double *out_err_est);

// ⟨m, alpha | n, beta⟩ by adaptive quadrature.
//
// # Safety
// As [`ccs_overlap`].
enum CcsStatus ccs_overlap_quadrature(int64_t m,
                                      double alpha,
                                      int64_t n,
                                      double beta,
                                      double abs_tol,
                                      double rel_tol,
                                      double *out_re,
                                      double *out_im,
                                      double *out_err_est);

// ⟨Q⟩ in |m, alpha⟩.
//
// # Safety
// `out` must be valid for writes.
enum CcsStatus ccs_expectation_q(int64_t m, double alpha, double *out);

// ⟨P⟩ in |m, alpha⟩.
//
// # Safety
// `out` must be valid for writes.
enum CcsStatus ccs_expectation_p(int64_t m, double alpha, double *out);

// ⟨P²⟩ in |m, alpha⟩.
//
// # Safety
// `out` must be valid for writes.
enum CcsStatus ccs_expectation_p2(int64_t m, double alpha, double *out);

// ⟨P²⟩ - ⟨P⟩² in |m, alpha⟩.
//
// # Safety
// `out` must be valid for writes.
enum CcsStatus ccs_momentum_dispersion(int64_t m, double alpha, double *out);

// Samples |m, alpha⟩ on `n_grid` points φ_j = -π + 2πj/n_grid.
//
// # Safety
// `out` must be valid for writes. The handle written there must be
// released with [`ccs_wavefunction_free`].
enum CcsStatus ccs_sample_state(int64_t m,
                                double alpha,
                                size_t n_grid,
                                struct CcsWaveFunction **out);

// Samples a named test vector (`vacuum`, `plane_wave_N`, `two_peak`),
// normalized on the grid.
//
// # Safety
// `name` must be a NUL-terminated string; `out` as in [`ccs_sample_state`].
enum CcsStatus ccs_test_vector(const char *name, size_t n_grid, struct CcsWaveFunction **out);

// Builds a wave function from `len` grid amplitudes.
//
// # Safety
// `re` and `im` must point to `len` readable values; `out` as in
// [`ccs_sample_state`].
enum CcsStatus ccs_wavefunction_from_amplitudes(const double *re,
                                                const double *im,
                                                size_t len,
                                                struct CcsWaveFunction **out);

// Number of grid points, or 0 for a null handle.
//
// # Safety
// `psi` must be null or a live handle.
size_t ccs_wavefunction_len(const struct CcsWaveFunction *psi);

// Copies the amplitudes into `re` and `im`, which must hold exactly
// `ccs_wavefunction_len(psi)` values.
//
// # Safety
// `psi` must be a live handle; `re` and `im` must point to `len` writable
// values.
enum CcsStatus ccs_wavefunction_amplitudes(const struct CcsWaveFunction *psi,
                                           double *re,
                                           double *im,
                                           size_t len);

// Releases a wave function. Null is ignored.
//
// # Safety
// `psi` must be null or a handle not yet freed.
void ccs_wavefunction_free(struct CcsWaveFunction *psi);

// Runs the resolution-of-unity check for a grid-normalized `eta`.
//
// # Safety
// `eta` must be a live handle; `out` must be valid for writes and the
// report written there released with [`ccs_report_free`].
enum CcsStatus ccs_resolution_check(const struct CcsWaveFunction *eta,
                                    size_t k_max,
                                    double abs_tol,
                                    double rel_tol,
                                    struct CcsResolutionReport **out);

// Σ_k ∫|⟨k,α|η⟩|² dα, or NaN for a null handle.
//
// # Safety
// `report` must be null or a live handle.
double ccs_report_estimate(const struct CcsResolutionReport *report);

// |estimate - 2π|, or NaN for a null handle.
//
// # Safety
// `report` must be null or a live handle.
double ccs_report_defect(const struct CcsResolutionReport *report);

// Number of per-k terms (2·k_max + 1), or 0 for a null handle.
//
// # Safety
// `report` must be null or a live handle.
size_t ccs_report_term_count(const struct CcsResolutionReport *report);

// Copies the per-k terms, ordered k = -k_max..=k_max.
//
// # Safety
// `report` must be a live handle and `out` must point to `len` writable
// values, `len` being [`ccs_report_term_count`].
enum CcsStatus ccs_report_terms(const struct CcsResolutionReport *report, double *out, size_t len);

// Writes the report as JSON into `buf` like [`ccs_last_error_message`]
// and returns the full length excluding the terminator.
//
// # Safety
// `report` must be a live handle; `buf` null or `len` writable bytes.
size_t ccs_report_json(const struct CcsResolutionReport *report, char *buf, size_t len);

// Releases a report. Null is ignored.
//
// # Safety
// `report` must be null or a handle not yet freed.
void ccs_report_free(struct CcsResolutionReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIRCLE_CS_H */
