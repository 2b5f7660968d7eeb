#ifndef QPFT_QPFT_H
#define QPFT_QPFT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(QPFT_BUILDING)
#define QPFT_API __attribute__((visibility("default")))
#else
#define QPFT_API
#endif

typedef enum qpft_status {
    QPFT_OK = 0,
    QPFT_E_ZERO_COUPLING,
    QPFT_E_EMPTY_PARAMS,
    QPFT_E_DIM_MISMATCH,
    QPFT_E_ZERO_LAMBDA,
    QPFT_E_NON_FINITE,
    QPFT_E_INCOMMENSURATE_GRID,
    QPFT_E_ZERO_SIGNAL,
    QPFT_E_STEP_MISMATCH,
    QPFT_E_INTERPOLATION_OVERRUN,
    QPFT_E_UNSUPPORTED_KIND,
    QPFT_E_NON_POSITIVE_LAMBDA,
    QPFT_E_QUADRATURE_NONCONVERGENCE,
    QPFT_E_EDGE_MASS,
    QPFT_E_RESOLUTION,
    QPFT_E_NO_SPECTRAL_GAP,
    QPFT_E_SINGULAR_SYMBOL,
    QPFT_E_EMPTY_PASSBAND,
    QPFT_E_GRID_MISMATCH,
    QPFT_E_INVALID_ARGUMENT,
    QPFT_E_IO,
    QPFT_E_INTERNAL
} qpft_status;

typedef enum qpft_domain { QPFT_SPACE = 0, QPFT_FREQUENCY = 1 } qpft_domain;
typedef enum qpft_path { QPFT_PATH_DIRECT = 0, QPFT_PATH_FAST = 1 } qpft_path;
typedef enum qpft_conv_type {
    QPFT_CONV_PLAIN = 0,
    QPFT_CONV_TYPE1,
    QPFT_CONV_TYPE2,
    QPFT_CONV_TYPE2_DUAL,
    QPFT_CONV_TYPE3
} qpft_conv_type;

typedef struct qpft_params qpft_params;
typedef struct qpft_grid qpft_grid;
typedef struct qpft_field qpft_field;

/* Message of the last failing call on this thread; empty after success. */
QPFT_API const char* qpft_last_error(void);
QPFT_API const char* qpft_status_name(qpft_status s);
/* Nonzero for numeric failures (non-convergence, singular symbol, ...), zero for bad input. */
QPFT_API int qpft_status_is_numeric(qpft_status s);

/* quintuples: dims × (a, b, c, d, e) */
QPFT_API qpft_status qpft_params_create(const double* quintuples, size_t dims, qpft_params** out);
QPFT_API void qpft_params_free(qpft_params* p);
QPFT_API size_t qpft_params_dims(const qpft_params* p);
QPFT_API qpft_status qpft_params_get(const qpft_params* p, size_t axis, double quintuple[5]);
QPFT_API size_t qpft_params_warning_count(const qpft_params* p);
QPFT_API const char* qpft_params_warning(const qpft_params* p, size_t i);

QPFT_API qpft_status qpft_grid_create(const double* origin, const double* step, const size_t* count, size_t dims,
                                      qpft_grid** out);
QPFT_API void qpft_grid_free(qpft_grid* g);
QPFT_API size_t qpft_grid_dims(const qpft_grid* g);
QPFT_API size_t qpft_grid_size(const qpft_grid* g);
QPFT_API qpft_status qpft_grid_axis(const qpft_grid* g, size_t axis, double* origin, double* step, size_t* count);
QPFT_API qpft_status qpft_default_frequency_grid(const qpft_grid* x, const qpft_params* p, qpft_grid** out);
QPFT_API qpft_status qpft_default_space_grid(const qpft_grid* w, const qpft_params* p, qpft_grid** out);

/* values: interleaved re/im, row-major with the last axis fastest; NULL gives zeros. */
QPFT_API qpft_status qpft_field_create(const qpft_grid* g, qpft_domain domain, const double* values,
                                       qpft_field** out);
QPFT_API void qpft_field_free(qpft_field* f);
QPFT_API size_t qpft_field_size(const qpft_field* f);
QPFT_API qpft_domain qpft_field_domain(const qpft_field* f);
/* Borrowed pointer to 2·size doubles, valid until the field is freed. */
QPFT_API const double* qpft_field_data(const qpft_field* f);
QPFT_API qpft_status qpft_field_grid(const qpft_field* f, qpft_grid** out);

typedef struct qpft_diagnostics {
    double edge_energy;
    double discarded_tail;
    size_t warning_count;
} qpft_diagnostics;

/* out_grid NULL selects the default reciprocal grid. diag may be NULL. */
QPFT_API qpft_status qpft_transform(const qpft_field* f, const qpft_params* p, const qpft_grid* out_grid,
                                    qpft_path path, int inverse, qpft_field** out, qpft_diagnostics* diag);
QPFT_API qpft_status qpft_parseval_residual(const qpft_field* f, const qpft_params* p, const qpft_grid* out_grid,
                                            double* residual);
QPFT_API qpft_status qpft_edge_energy(const qpft_field* f, double shell, double* fraction);

/* p may be NULL for QPFT_CONV_PLAIN; lambda is read for type3 only. */
QPFT_API qpft_status qpft_convolve(qpft_conv_type type, double lambda, const qpft_field* f, const qpft_field* g,
                                   const qpft_params* p, qpft_field** out, double* discarded_tail);

QPFT_API qpft_status qpft_mollifier_closed(const qpft_params* p, double lambda, const qpft_grid* g, qpft_field** out);
QPFT_API qpft_status qpft_mollifier_quadrature(const qpft_params* p, double lambda, const double* omega,
                                               double value[2]);
QPFT_API qpft_status qpft_mollifier_unit_mass(const qpft_params* p, double lambda, double half_width, double step,
                                              double mass[2], double* coverage);
QPFT_API qpft_status qpft_approx_identity(const qpft_field* f, const qpft_params* p, double lambda,
                                          qpft_field** out);
QPFT_API qpft_status qpft_product_theorem_residual(const qpft_field* f, const qpft_field* g, const qpft_params* p,
                                                   double lambda, double* residual);

QPFT_API qpft_status qpft_boas_transform(const qpft_field* f, const qpft_params* p, qpft_field** out);
QPFT_API qpft_status qpft_delta(const qpft_field* f, const qpft_params* p, qpft_field** out);

#define QPFT_BOAS_MAX 12
typedef struct qpft_boas_growth {
    double R;
    double gamma;
    double gamma_meas;
    double norms[QPFT_BOAS_MAX + 1]; /* ‖Bⁿf‖₂, n = 0..count−1 */
    size_t count;
    int partial;
    /* Filled when the call fails with QPFT_E_NO_SPECTRAL_GAP: (‖Bⁿf‖/‖f‖)^{1/n}, n = 1..root_count. */
    double roots[QPFT_BOAS_MAX];
    size_t root_count;
} qpft_boas_growth;

QPFT_API qpft_status qpft_boas_growth_run(const qpft_field* f, const qpft_params* p, int n_max,
                                          qpft_boas_growth* out);

QPFT_API qpft_status qpft_solve(const double lambda[2], const qpft_field* kernel, const qpft_field* rhs,
                                qpft_conv_type type, double conv_lambda, const qpft_params* p, double regularization,
                                qpft_field** phi, double* residual, double* min_symbol);

/* lo/hi: passband per axis; rolloff 0 is a hard edge. */
QPFT_API qpft_status qpft_filter_design(const double* lo, const double* hi, size_t dims, double rolloff,
                                        double floor, const qpft_params* p, const qpft_grid* freq,
                                        qpft_field** mask);
QPFT_API qpft_status qpft_filter_apply(const qpft_field* r, const qpft_field* mask, const qpft_params* p,
                                       qpft_field** out);
QPFT_API qpft_status qpft_snr_db(const qpft_field* clean, const qpft_field* observed, double* db);

/* amplitude · Π exp(−width_k (x_k − center_k)²) sampled on g, and its exact transform on w. */
QPFT_API qpft_status qpft_gaussian(const qpft_grid* g, const double* center, const double* width,
                                   const double amplitude[2], qpft_field** out);
QPFT_API qpft_status qpft_gaussian_spectrum(const qpft_grid* w, const double* center, const double* width,
                                            const double amplitude[2], const qpft_params* p, qpft_field** out);

/* suite: all, transform, convolution, inversion, boas, applications. Returns QPFT_OK once the suite ran;
 * *all_pass says whether every check passed. *json is released with qpft_string_free. */
QPFT_API qpft_status qpft_verify(const char* suite, char** json, int* all_pass);
QPFT_API void qpft_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
