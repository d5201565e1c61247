#ifndef HYPERMAT_H
#define HYPERMAT_H

/* C interface to the hypermat library. Matrices and parameter sets are
 * opaque handles owned by the caller. Every call returns an hm_status; on
 * failure hm_last_error() describes it for the calling thread. Strings
 * returned through char** are released with hm_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(HYPERMAT_BUILDING_LIBRARY)
#define HM_API __attribute__((visibility("default")))
#else
#define HM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hm_status {
    HM_OK = 0,
    HM_ERR_HYPOTHESIS = 1,       /* a commutation / stability / invertibility hypothesis fails */
    HM_ERR_DOMAIN = 2,           /* malformed input or argument outside a guard region */
    HM_ERR_NUMERICAL = 3,        /* series or quadrature did not reach tolerance */
    HM_ERR_INVALID_ARGUMENT = 4, /* null handle, unknown name, bad size */
    HM_ERR_INTERNAL = 5
} hm_status;

typedef struct hm_complex {
    double re;
    double im;
} hm_complex;

typedef struct hm_matrix hm_matrix;
typedef struct hm_params hm_params;

HM_API const char* hm_version(void);
/* Message of the last failed call on this thread; "" after success. */
HM_API const char* hm_last_error(void);
/* Violated hypothesis of the last HM_ERR_HYPOTHESIS on this thread, e.g. "CB = BC". */
HM_API const char* hm_last_hypothesis(void);
HM_API void hm_string_free(char* s);

/* Square matrices, row-major complex entries. */
HM_API hm_status hm_matrix_new(size_t rows, size_t cols, const hm_complex* entries, hm_matrix** out);
HM_API void hm_matrix_free(hm_matrix* m);
HM_API size_t hm_matrix_rows(const hm_matrix* m);
HM_API size_t hm_matrix_cols(const hm_matrix* m);
HM_API hm_status hm_matrix_get(const hm_matrix* m, size_t row, size_t col, hm_complex* out);
/* Copies rows * cols entries, row-major. */
HM_API hm_status hm_matrix_data(const hm_matrix* m, hm_complex* out);

HM_API hm_status hm_mat_exp(const hm_matrix* a, hm_matrix** out);
HM_API hm_status hm_mat_log(const hm_matrix* a, hm_matrix** out);
/* t^A for real t > 0. */
HM_API hm_status hm_mat_real_power(const hm_matrix* a, double t, hm_matrix** out);
/* z^-A on the principal branch. */
HM_API hm_status hm_mat_neg_power(const hm_matrix* a, hm_complex z, hm_matrix** out);
/* alpha = max Re, beta = min Re of the spectrum. */
HM_API hm_status hm_stability(const hm_matrix* a, double* alpha, double* beta, int* positive_stable);

HM_API hm_status hm_gamma(const hm_matrix* a, hm_matrix** out);
HM_API hm_status hm_gamma_limit(const hm_matrix* a, long n, hm_matrix** out);
/* A (A+I) ... (A+(n-1)I) Gamma^-1(A + nI), with n large enough that A + nI is invertible. */
HM_API hm_status hm_reciprocal_gamma(const hm_matrix* a, int n, hm_matrix** out);
HM_API hm_status hm_pochhammer(const hm_matrix* a, int n, hm_matrix** out);
HM_API hm_status hm_beta(const hm_matrix* a, const hm_matrix* b, hm_matrix** out);
/* x may be NULL for X = O. error_estimate may be NULL. */
HM_API hm_status hm_ext_beta(const hm_matrix* a, const hm_matrix* b, const hm_matrix* x, hm_matrix** out,
                             double* error_estimate);
/* Image of z^A under the extended fractional derivative of order mu (Re(mu) < 0); x may be NULL. */
HM_API hm_status hm_frac_power_rule(const hm_matrix* a, hm_complex mu, const hm_matrix* x, hm_complex z,
                                    hm_matrix** out);

/* Parameter sets keyed by role: "A", "B", "B'", "B''", "C", "C'", "X". */
HM_API hm_status hm_params_new(hm_params** out);
HM_API void hm_params_free(hm_params* p);
HM_API hm_status hm_params_set(hm_params* p, const char* role, const hm_matrix* m);

/* function: gauss_2f1, ext_gauss, ext_kummer, ext_appell_f1, ext_appell_f2, ext_lauricella_fd3.
 * method: "series" or "integral"; NULL means series. */
HM_API hm_status hm_eval(const char* function, const char* method, const hm_params* p, hm_complex z, hm_complex w,
                         hm_complex v, hm_matrix** out, double* error_estimate);

/* JSON front end. function / method override the same keys in the input; either may be NULL.
 * Output: {"result": matrix, "method": str, "error_estimate": float}. */
HM_API hm_status hm_eval_json(const char* input, const char* function, const char* method, char** out);

/* Commuting family as JSON. roles_csv NULL selects the default layout; otherwise a
 * comma-separated role list. The window (0, 0) keeps each role's default window; any
 * other window applies to every role, and an empty or non-finite one fails with
 * HM_ERR_NUMERICAL like any other infeasible window. */
HM_API hm_status hm_gen_family_json(uint64_t seed, int r, const char* roles_csv, double window_lo,
                                    double window_hi, char** out);

HM_API size_t hm_identity_count(void);
HM_API const char* hm_identity_name(size_t index);

/* Verification reports as NDJSON (one line per identity, each ending in '\n').
 * identity NULL runs the whole suite. tolerance <= 0 keeps per-identity defaults.
 * *passed is 1 iff every non-probe report passes. */
HM_API hm_status hm_verify_json(uint64_t seed, const char* profile, const char* identity, double tolerance,
                                char** out, int* passed);

#ifdef __cplusplus
}
#endif

#endif
