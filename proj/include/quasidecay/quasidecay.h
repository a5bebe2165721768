/*
 * Copyright 2026 The quasidecay Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libquasidecay.
 *
 * Every fallible call returns a qd_status. On failure the message is
 * available from qd_last_error() on the same thread until the next failing
 * call. Objects are opaque handles released with their *_destroy function;
 * destroying NULL is a no-op. Time is in units with hbar = 1.
 */
#ifndef QUASIDECAY_H
#define QUASIDECAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QD_API __declspec(dllexport)
#else
#define QD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qd_status {
    QD_OK = 0,
    QD_ERR_PARAMETER = 1, /* invalid model parameters */
    QD_ERR_DOMAIN = 2,    /* argument outside the supported domain */
    QD_ERR_NUMERICAL = 3, /* convergence or accuracy check failed */
    QD_ERR_ANALYSIS = 4,  /* curve unsuitable for the requested analysis */
    QD_ERR_NULL = 5,      /* required pointer was NULL */
    QD_ERR_RANGE = 6,     /* index out of range */
    QD_ERR_INTERNAL = 7
} qd_status;

QD_API const char* qd_last_error(void);
QD_API const char* qd_status_name(qd_status status);
QD_API const char* qd_version(void);

/* ---- model ---- */

typedef struct qd_model qd_model;

typedef struct qd_model_info {
    double e_b;
    double delta;
    double g;
    double alpha;
    double theta;
    double gamma;
    double t_h;
} qd_model_info;

QD_API qd_status qd_model_create(double e_b, double delta, double g, qd_model** out);
/* Same spacing and coupling, discrete level moved to alpha * delta. */
QD_API qd_status qd_model_with_alpha(const qd_model* model, double alpha, qd_model** out);
QD_API qd_status qd_model_with_coupling(const qd_model* model, double g, qd_model** out);
QD_API void qd_model_destroy(qd_model* model);
QD_API qd_status qd_model_get_info(const qd_model* model, qd_model_info* out);
/* T = delta t / 2 and the interval index m with m pi < T <= (m+1) pi. */
QD_API qd_status qd_to_dimensionless(const qd_model* model, double t, double* big_t, int64_t* interval);

/* ---- first order ---- */

QD_API qd_status qd_sinc(double x, double* out);
QD_API qd_status qd_dirichlet_kernel(int64_t m, double theta, double* out);
QD_API qd_status qd_w_alpha(double big_t, double alpha, double* out);
QD_API qd_status qd_w_alpha_slope(int64_t m, double alpha, double* out);
QD_API qd_status qd_w_alpha_at_multiple(int64_t m, double alpha, double* out);
QD_API qd_status qd_w_alpha_direct(double big_t, double alpha, int64_t truncation, double* value,
                                   double* tail_bound);
/* (4g^2/delta^2) W_alpha(delta t / 2). */
QD_API qd_status qd_p_first_order(const qd_model* model, double t, double* out);
/* First-order sum over explicit levels (energies strictly increasing). */
QD_API qd_status qd_p_first_order_levels(const double* energies, const double* couplings, size_t count,
                                         double e_b, double t, double* out);
/* Continuum form with constant density and coupling on [a, b]. */
QD_API qd_status qd_p_first_order_band(double density, double coupling, double a, double b, double e_b,
                                       double t, double rel_tol, double* value, double* error_estimate);
QD_API qd_status qd_golden_rule_rate(double density, double coupling, double* out);

typedef struct qd_validity_window {
    double t_min;
    double t_max;
    int nonempty;
} qd_validity_window;

/* Untruncated ideal model: infinite band, density 1/delta. */
QD_API qd_status qd_validity_window_ideal(const qd_model* model, qd_validity_window* out);
/* Band [lower, upper] with constant density. Infinite edges are allowed. */
QD_API qd_status qd_validity_window_band(double lower, double upper, double density, double e_b,
                                         qd_validity_window* out);

/* ---- exact amplitude ---- */

#define QD_DEFAULT_MAX_ECHO 8
#define QD_MAX_SUPPORTED_ECHO 64

/* Interaction-picture survival amplitude S_bb(t), closed form up to
 * (k_max + 1) t_H. */
QD_API qd_status qd_survival_amplitude(const qd_model* model, double t, int k_max, double* re, double* im);
QD_API qd_status qd_echo_polynomial(int k, double x, double* out);
QD_API qd_status qd_echo_polynomial_laguerre(int k, double x, double* out);
QD_API qd_status qd_generalized_laguerre(int n, double a, double x, double* out);

typedef struct qd_series qd_series;

typedef struct qd_series_point {
    double t;
    double re;
    double im;
    double survival;
    double survival_rate; /* dP_i/dt, left-sided at multiples of t_H */
    int64_t interval;
} qd_series_point;

typedef struct qd_boundary {
    size_t index; /* grid index */
    int64_t k;    /* t = k t_H */
    double re_left, im_left;
    double re_right, im_right;
    double rate_left;
    double rate_right;
} qd_boundary;

QD_API qd_status qd_exact_series(const qd_model* model, const double* grid, size_t count, int k_max,
                                 qd_series** out);
QD_API void qd_series_destroy(qd_series* series);
QD_API size_t qd_series_size(const qd_series* series);
QD_API qd_status qd_series_point_at(const qd_series* series, size_t i, qd_series_point* out);
QD_API size_t qd_series_boundary_count(const qd_series* series);
QD_API qd_status qd_series_boundary_at(const qd_series* series, size_t i, qd_boundary* out);

/* ---- numeric propagator ---- */

typedef enum qd_solver { QD_SOLVER_ARROWHEAD = 0, QD_SOLVER_DENSE = 1 } qd_solver;

typedef struct qd_propagator qd_propagator;
typedef struct qd_propagation qd_propagation;

typedef struct qd_propagation_point {
    double t;
    double survival;
    double transferred;
    double norm;
    double edge_population;
    double re; /* <b|psi(t)> with the free phase removed */
    double im;
} qd_propagation_point;

QD_API qd_status qd_propagator_create(const qd_model* model, int64_t half_width, qd_solver solver,
                                      qd_propagator** out);
QD_API void qd_propagator_destroy(qd_propagator* propagator);
QD_API size_t qd_propagator_dimension(const qd_propagator* propagator);
QD_API double qd_propagator_orthogonality_error(const qd_propagator* propagator);

QD_API qd_status qd_propagate(const qd_propagator* propagator, const double* grid, size_t count,
                              qd_propagation** out);
QD_API void qd_propagation_destroy(qd_propagation* result);
QD_API size_t qd_propagation_size(const qd_propagation* result);
QD_API qd_status qd_propagation_point_at(const qd_propagation* result, size_t i, qd_propagation_point* out);

#define QD_EDGE_POPULATION_GUARD 1e-6

typedef struct qd_convergence_entry {
    int64_t half_width;
    double max_deviation;
    double max_edge_population;
    int edge_warning;
} qd_convergence_entry;

typedef struct qd_convergence qd_convergence;

QD_API qd_status qd_convergence_study(const qd_model* model, const double* grid, size_t count,
                                      const int64_t* half_widths, size_t n_widths, double tolerance,
                                      qd_solver solver, qd_convergence** out);
QD_API void qd_convergence_destroy(qd_convergence* report);
QD_API size_t qd_convergence_size(const qd_convergence* report);
QD_API qd_status qd_convergence_entry_at(const qd_convergence* report, size_t i, qd_convergence_entry* out);
/* Writes the smallest converged half width, or returns QD_ERR_RANGE when
 * none met the tolerance. */
QD_API qd_status qd_convergence_smallest(const qd_convergence* report, int64_t* out);

/* ---- analysis ---- */

typedef struct qd_kink_options {
    double window;
    double exclusion;
    double significance;
    double match_tolerance;
    double min_points_per_period;
    double outlier_factor;
    double relative_floor;
} qd_kink_options;

typedef struct qd_kink {
    double location;
    double left_slope;
    double right_slope;
    double standard_error;
} qd_kink;

typedef struct qd_kink_report qd_kink_report;

QD_API void qd_kink_options_default(qd_kink_options* out);
/* options may be NULL for the defaults. */
QD_API qd_status qd_detect_kinks(const double* t, const double* y, size_t count, double period,
                                 int64_t expected_count, const qd_kink_options* options, qd_kink_report** out);
QD_API void qd_kink_report_destroy(qd_kink_report* report);
QD_API size_t qd_kink_report_size(const qd_kink_report* report);
QD_API qd_status qd_kink_report_kink(const qd_kink_report* report, size_t i, qd_kink* out);
QD_API size_t qd_kink_report_expected_count(const qd_kink_report* report);
QD_API qd_status qd_kink_report_expected(const qd_kink_report* report, size_t i, double* out);
QD_API size_t qd_kink_report_matched_count(const qd_kink_report* report);
/* i-th match: index of the kink and the multiple k it was paired with. */
QD_API qd_status qd_kink_report_matched(const qd_kink_report* report, size_t i, size_t* kink, int64_t* k);
QD_API size_t qd_kink_report_unmatched_count(const qd_kink_report* report);
QD_API qd_status qd_kink_report_unmatched(const qd_kink_report* report, size_t i, size_t* kink);
QD_API size_t qd_kink_report_missing_count(const qd_kink_report* report);
QD_API qd_status qd_kink_report_missing(const qd_kink_report* report, size_t i, int64_t* k);

typedef enum qd_rate_mode { QD_RATE_LINEAR_TRANSFER = 0, QD_RATE_LOG_SURVIVAL = 1 } qd_rate_mode;

typedef struct qd_rate_fit {
    double rate;
    double t_lo;
    double t_hi;
    double residual_rms;
    double reference;
    double relative_error;
    size_t points;
} qd_rate_fit;

QD_API qd_status qd_fit_rate(const double* t, const double* y, size_t count, qd_rate_mode mode, double t_lo,
                             double t_hi, double t_h, double reference, qd_rate_fit* out);

typedef struct qd_breakdown_cell {
    int64_t interval;
    double max_relative_deviation;
    double max_absolute_deviation;
    double max_ratio;
    double t_at_max;
} qd_breakdown_cell;

typedef struct qd_breakdown qd_breakdown;

QD_API qd_status qd_breakdown_scan(const qd_model* const* models, size_t count, double t_max_over_th,
                                   int64_t points_per_interval, qd_breakdown** out);
QD_API void qd_breakdown_destroy(qd_breakdown* table);
QD_API size_t qd_breakdown_rows(const qd_breakdown* table);
QD_API size_t qd_breakdown_columns(const qd_breakdown* table);
QD_API qd_status qd_breakdown_alpha(const qd_breakdown* table, size_t row, double* out);
QD_API qd_status qd_breakdown_cell_at(const qd_breakdown* table, size_t row, size_t column,
                                      qd_breakdown_cell* out);

/* residuals must hold `count` doubles. exponent is NaN with fewer than two
 * non-zero residuals. */
QD_API qd_status qd_order_scaling(const qd_model* model, double t, const double* couplings, size_t count,
                                  double* residuals, double* exponent, double* fit_rms);

#ifdef __cplusplus
}
#endif

#endif /* QUASIDECAY_H */
