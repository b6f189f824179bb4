/* matlog: dense matrix logarithms, exponentials, and two-exponential
 * factorizations over the reals and complexes, every result certified by a
 * computable residual.
 *
 * Conventions:
 *   - All matrices are square, row-major. Complex buffers interleave
 *     re,im pairs, so a complex n x n matrix occupies 2*n*n doubles.
 *   - Functions return ML_OK on success. On failure the out-parameters are
 *     untouched and ml_last_error() describes what went wrong (per thread).
 *   - Out-parameters documented as optional accept NULL.
 *   - Every handle returned through an out-parameter is owned by the caller
 *     and released with the matching *_free function.
 */
#ifndef MATLOG_H
#define MATLOG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ml_status {
  ML_OK = 0,
  ML_INVALID_ARGUMENT = 1,      /* input outside an operation's contract */
  ML_DIMENSION_MISMATCH = 2,    /* operands of different sizes */
  ML_SINGULAR = 3,              /* numerically non-invertible matrix */
  ML_NOT_CONTRACTIVE = 4,       /* log series argument too far from I */
  ML_SINGULAR_SPECTRUM = 5,     /* an eigenvalue too close to 0 to aim a ray */
  ML_SPECTRUM_ON_RAY = 6,       /* an eigenvalue on the closed negative axis */
  ML_NON_POSITIVE_DETERMINANT = 7,
  ML_NON_NEGATIVE_DETERMINANT = 8,
  ML_ODD_PARITY = 9,            /* sign matrix with an odd number of -1 */
  ML_PARITY_VIOLATION = 10,     /* inconsistent negative-eigenvalue count */
  ML_NUMERICAL_FAILURE = 11     /* admissible input, certificate not achieved */
} ml_status;

/* Stable name for a status value, e.g. "SpectrumOnRay". */
const char* ml_status_name(ml_status s);

/* Message for the most recent failure on this thread ("" if none yet). */
const char* ml_last_error(void);

typedef struct ml_tolerance {
  double residual_tol;    /* certified residual bound, default 1e-10 */
  double series_tail_tol; /* a-priori series truncation tail, default 1e-15 */
  double eta;             /* continuation contraction target in (0,1), default 0.5 */
} ml_tolerance;

ml_tolerance ml_tolerance_default(void);

/* ---- matrices ------------------------------------------------------- */

typedef struct ml_matrix ml_matrix; /* opaque square matrix, real or complex */

ml_status ml_matrix_new_real(int n, const double* entries /* n*n */, ml_matrix** out);
ml_status ml_matrix_new_complex(int n, const double* entries /* 2*n*n */, ml_matrix** out);
void ml_matrix_free(ml_matrix* m);

int ml_matrix_dim(const ml_matrix* m);
int ml_matrix_is_real(const ml_matrix* m);

/* Copies the entries out: n*n doubles for a real matrix, 2*n*n interleaved
 * doubles for a complex one. The buffer must be large enough. */
ml_status ml_matrix_entries(const ml_matrix* m, double* out);

/* ---- continuation traces -------------------------------------------- */

typedef struct ml_trace ml_trace; /* opaque record of a continuation run */

int ml_trace_steps(const ml_trace* t); /* accepted points, start included */
int ml_trace_bisections(const ml_trace* t);
double ml_trace_final_residual(const ml_trace* t);
ml_status ml_trace_step(const ml_trace* t, int i, double* param, double* contraction,
                        int* series_terms);
void ml_trace_free(ml_trace* t);

/* ---- operations ------------------------------------------------------ */

/* Eigenvalues into out (2*n interleaved doubles), sorted by (re, im); real
 * input yields a conjugate-symmetric multiset. residual (optional) is the
 * scaled near-singularity certificate of the computed values. */
ml_status ml_eigenvalues(const ml_matrix* a, double* out, double* residual);

/* Matrix exponential; the result has the field of the input. tail_bound
 * (optional) receives the achieved a-priori truncation bound. */
ml_status ml_expm(const ml_matrix* a, const ml_tolerance* tol, ml_matrix** out,
                  double* tail_bound);

/* Logarithm of an invertible matrix over the complexes (real input is
 * promoted): exp(log) = a within residual. trace (optional) records the
 * continuation walk. */
ml_status ml_log_complex(const ml_matrix* a, const ml_tolerance* tol, ml_matrix** log,
                         double* residual, ml_trace** trace);

/* Real logarithm of a real matrix with no eigenvalue on (-inf, 0]. */
ml_status ml_log_real_ray(const ml_matrix* a, const ml_tolerance* tol, ml_matrix** log,
                          double* residual, ml_trace** trace);

/* Real logarithm of x^2 for invertible real x (no condition on the ray). */
ml_status ml_log_real_square(const ml_matrix* x, const ml_tolerance* tol, ml_matrix** log,
                             double* residual, ml_trace** trace);

/* Real logarithm of diag(a, a) (dimension 2n) for invertible real a. */
ml_status ml_log_doubled_block(const ml_matrix* a, const ml_tolerance* tol, ml_matrix** log,
                               double* residual, ml_trace** trace);

/* Factors real m with det > 0 as expm(b1) * expm(b2), both real. k_negative
 * (optional) counts the negative real eigenvalues absorbed by b1; residual
 * (optional) certifies ||expm(b1) expm(b2) - m||_F. */
ml_status ml_factor_two_exp(const ml_matrix* m, const ml_tolerance* tol, ml_matrix** b1,
                            ml_matrix** b2, int* k_negative, double* residual);

/* det < 0 variant: m = diag(-1,1,...,1) * expm(b1) * expm(b2). */
ml_status ml_factor_neg_det(const ml_matrix* m, const ml_tolerance* tol, ml_matrix** b1,
                            ml_matrix** b2, int* k_negative, double* residual);

/* Determinant sign of an invertible real matrix: +1 or -1 into sign. */
ml_status ml_classify_component(const ml_matrix* m, int* sign);

/* Weak Schur form of a real matrix: q orthogonal, t = q^T m q with the
 * leading k columns upper triangular (the real eigenvalues, ascending).
 * residual (optional) is the combined orthogonality/similarity certificate. */
ml_status ml_weak_schur(const ml_matrix* m, ml_matrix** q, ml_matrix** t, int* k,
                        double* residual);

/* ---- embedded acceptance suite --------------------------------------- */

typedef struct ml_selftest_report ml_selftest_report;

/* Runs the full acceptance suite (deterministic for a fixed seed). Returns
 * ML_OK when the suite ran, whether or not criteria passed. */
ml_status ml_selftest_run(uint64_t seed, ml_selftest_report** out);

int ml_selftest_count(const ml_selftest_report* r);
int ml_selftest_index(const ml_selftest_report* r, int i);
const char* ml_selftest_name(const ml_selftest_report* r, int i);
int ml_selftest_passed(const ml_selftest_report* r, int i);
double ml_selftest_seconds(const ml_selftest_report* r, int i);
const char* ml_selftest_detail(const ml_selftest_report* r, int i);
void ml_selftest_free(ml_selftest_report* r);

#ifdef __cplusplus
}
#endif

#endif /* MATLOG_H */
