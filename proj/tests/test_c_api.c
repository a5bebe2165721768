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

/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "quasidecay/quasidecay.h"

static int failures = 0;
static int checks = 0;

#define CHECK(cond)                                                              \
    do {                                                                         \
        ++checks;                                                                \
        if (!(cond)) {                                                           \
            ++failures;                                                          \
            fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
        }                                                                        \
    } while (0)

#define CHECK_OK(call) CHECK((call) == QD_OK)

static const double PI = 3.14159265358979323846;

static int close_to(double a, double b, double tol) { return fabs(a - b) <= tol; }

static void test_model(void) {
    qd_model* m = NULL;
    qd_model_info info;
    CHECK_OK(qd_model_create(-1.25, 1.0, 0.15, &m));
    CHECK_OK(qd_model_get_info(m, &info));
    CHECK(info.alpha == 0.75);
    CHECK(close_to(info.gamma, 2.0 * PI * 0.0225, 1e-15));
    CHECK(close_to(info.t_h, 2.0 * PI, 1e-15));

    double big_t = 0.0;
    int64_t interval = -1;
    CHECK_OK(qd_to_dimensionless(m, 2.5 * info.t_h, &big_t, &interval));
    CHECK(close_to(big_t, 2.5 * PI, 1e-14));
    CHECK(interval == 2);
    CHECK_OK(qd_to_dimensionless(m, info.t_h, &big_t, &interval));
    CHECK(interval == 0);
    CHECK(qd_to_dimensionless(m, -1.0, &big_t, &interval) == QD_ERR_DOMAIN);
    CHECK(strlen(qd_last_error()) > 0);

    qd_model* half = NULL;
    CHECK_OK(qd_model_with_alpha(m, 0.5, &half));
    CHECK_OK(qd_model_get_info(half, &info));
    CHECK(info.alpha == 0.5);
    CHECK(qd_model_with_alpha(m, 1.5, &half) == QD_ERR_DOMAIN);
    qd_model* strong = NULL;
    CHECK_OK(qd_model_with_coupling(m, 0.3, &strong));
    CHECK_OK(qd_model_get_info(strong, &info));
    CHECK(close_to(info.gamma, 4.0 * 2.0 * PI * 0.0225, 1e-14));

    qd_model* bad = NULL;
    CHECK(qd_model_create(0.0, 0.0, 0.1, &bad) == QD_ERR_PARAMETER);
    CHECK(bad == NULL);
    CHECK(strstr(qd_last_error(), "spacing") != NULL);
    CHECK(qd_model_create(0.0, 1.0, -0.1, &bad) == QD_ERR_PARAMETER);
    CHECK(qd_model_create(0.0, 1.0, 0.1, NULL) == QD_ERR_NULL);
    CHECK(qd_model_get_info(NULL, &info) == QD_ERR_NULL);

    qd_model_destroy(strong);
    qd_model_destroy(half);
    qd_model_destroy(m);
    qd_model_destroy(NULL);
}

static void test_first_order(void) {
    double w = 0.0, tail = 0.0, s = 0.0;
    CHECK_OK(qd_w_alpha(PI / 2.0, 3.0 / 7.0, &w));
    CHECK(close_to(w, PI * PI / 2.0, 1e-13));
    CHECK_OK(qd_w_alpha(2.0 * PI, 0.5, &w));
    CHECK(fabs(w) <= 1e-12);
    CHECK(qd_w_alpha(1.0, 1.0, &w) == QD_ERR_DOMAIN);
    CHECK_OK(qd_w_alpha_direct(PI, 0.3, 100000, &w, &tail));
    CHECK(close_to(w, PI * PI, 1e-4 * PI * PI));
    CHECK(tail > 0.0);
    CHECK_OK(qd_w_alpha_slope(2, 0.0, &s));
    CHECK(close_to(s, 5.0 * PI, 1e-14));
    CHECK_OK(qd_w_alpha_at_multiple(3, 0.0, &s));
    CHECK(close_to(s, 9.0 * PI * PI, 1e-12));
    CHECK_OK(qd_dirichlet_kernel(1, 2.0 * PI * 0.25, &s));
    CHECK(close_to(s, sin(3.0 * PI / 4.0) / sin(PI / 4.0), 1e-15));
    CHECK_OK(qd_sinc(0.0, &s));
    CHECK(s == 1.0);

    qd_model* m = NULL;
    CHECK_OK(qd_model_create(0.3, 1.0, 0.15, &m));
    double p = 0.0;
    CHECK_OK(qd_p_first_order(m, PI, &p));
    CHECK(close_to(p, 2.0 * PI * 0.0225 * PI, 1e-14));
    qd_model_destroy(m);

    const double energies[3] = {-1.0, 0.0, 1.0};
    const double couplings[3] = {0.1, 0.2, 0.1};
    CHECK_OK(qd_p_first_order_levels(energies, couplings, 3, 0.0, 2.0, &p));
    CHECK(close_to(p, 0.04 * 4.0 + 2.0 * 0.01 * 4.0 * sin(1.0) * sin(1.0), 1e-14));
    const double unordered[3] = {0.0, -1.0, 1.0};
    CHECK(qd_p_first_order_levels(unordered, couplings, 3, 0.0, 2.0, &p) == QD_ERR_DOMAIN);

    double err = 0.0;
    CHECK_OK(qd_p_first_order_band(1.0, 0.1, -200.0, 200.0, 0.0, 3.0, 1e-8, &p, &err));
    CHECK(close_to(p, 2.0 * PI * 3.0 * 0.01, 0.01 * 2.0 * PI * 3.0 * 0.01));
    CHECK(qd_p_first_order_band(1.0, 0.1, 1.0, 2.0, 0.0, 3.0, 1e-8, &p, &err) == QD_ERR_DOMAIN);

    CHECK_OK(qd_golden_rule_rate(1.0, 0.15, &p));
    CHECK(close_to(p, 0.141372, 1e-6));

    qd_validity_window vw;
    qd_model* ideal = NULL;
    CHECK_OK(qd_model_create(0.3, 1.0, 0.1, &ideal));
    CHECK_OK(qd_validity_window_ideal(ideal, &vw));
    CHECK(vw.t_min == 0.0);
    CHECK(vw.t_max == 2.0 * PI);
    CHECK(vw.nonempty);
    qd_model_destroy(ideal);
    CHECK_OK(qd_validity_window_band(-10.0, 10.0, 1.0, 0.0, &vw));
    CHECK(close_to(vw.t_min, 0.2 * PI, 1e-15));
    CHECK_OK(qd_validity_window_band(-0.1, 10.0, 1.0, 0.0, &vw));
    CHECK(!vw.nonempty);
    CHECK(qd_validity_window_band(-0.1, 10.0, 1.0, 20.0, &vw) == QD_ERR_DOMAIN);
}

static void test_exact(void) {
    qd_model* m = NULL;
    CHECK_OK(qd_model_create(0.5, 1.0, 0.15, &m));
    qd_model_info info;
    CHECK_OK(qd_model_get_info(m, &info));
    double re = 0.0, im = 0.0;
    CHECK_OK(qd_survival_amplitude(m, 1.5 * info.t_h, QD_DEFAULT_MAX_ECHO, &re, &im));
    const double gt = info.gamma * info.t_h;
    CHECK(close_to(re, exp(-0.75 * gt) + 0.5 * gt * exp(-0.25 * gt), 1e-14));
    CHECK(fabs(im) <= 1e-15);
    CHECK(qd_survival_amplitude(m, 10.0 * info.t_h, QD_DEFAULT_MAX_ECHO, &re, &im) == QD_ERR_DOMAIN);
    CHECK(qd_survival_amplitude(m, 1.0, QD_MAX_SUPPORTED_ECHO + 1, &re, &im) == QD_ERR_DOMAIN);

    double c = 0.0, l = 0.0;
    CHECK_OK(qd_echo_polynomial(2, 1.5, &c));
    CHECK(close_to(c, 1.5 * 1.5 / 2.0 - 1.5, 1e-15));
    CHECK_OK(qd_echo_polynomial_laguerre(5, 1.3, &l));
    CHECK_OK(qd_echo_polynomial(5, 1.3, &c));
    CHECK(close_to(c, l, 1e-13));
    CHECK_OK(qd_generalized_laguerre(1, 1.0, 0.5, &l));
    CHECK(close_to(l, 1.5, 1e-15));

    double grid[801];
    for (int i = 0; i <= 800; ++i) grid[i] = 4.0 * info.t_h * i / 800.0;
    qd_series* s = NULL;
    CHECK_OK(qd_exact_series(m, grid, 801, QD_DEFAULT_MAX_ECHO, &s));
    CHECK(qd_series_size(s) == 801);
    qd_series_point pt;
    CHECK_OK(qd_series_point_at(s, 0, &pt));
    CHECK(pt.survival == 1.0);
    CHECK_OK(qd_series_point_at(s, 100, &pt));
    CHECK(close_to(pt.survival, exp(-info.gamma * pt.t), 1e-12));
    CHECK(pt.interval == 0);
    CHECK(qd_series_point_at(s, 801, &pt) == QD_ERR_RANGE);
    CHECK(qd_series_boundary_count(s) == 4);
    qd_boundary b;
    CHECK_OK(qd_series_boundary_at(s, 1, &b));
    CHECK(b.k == 2);
    CHECK(b.index == 400);
    CHECK(hypot(b.re_left - b.re_right, b.im_left - b.im_right) <= 1e-10);
    CHECK(fabs(b.rate_right - b.rate_left) > 1e-3);
    CHECK(qd_series_boundary_at(s, 4, &b) == QD_ERR_RANGE);
    qd_series_destroy(s);

    const double unsorted[3] = {0.0, 2.0, 1.0};
    CHECK(qd_exact_series(m, unsorted, 3, QD_DEFAULT_MAX_ECHO, &s) == QD_ERR_DOMAIN);
    CHECK(qd_exact_series(m, NULL, 3, QD_DEFAULT_MAX_ECHO, &s) == QD_ERR_NULL);
    qd_model_destroy(m);
}

static void test_propagator(void) {
    qd_model* m = NULL;
    CHECK_OK(qd_model_create(0.3, 1.0, 0.15, &m));
    qd_model_info info;
    CHECK_OK(qd_model_get_info(m, &info));
    qd_propagator* prop = NULL;
    CHECK_OK(qd_propagator_create(m, 200, QD_SOLVER_ARROWHEAD, &prop));
    CHECK(qd_propagator_dimension(prop) == 402);
    CHECK(qd_propagator_orthogonality_error(prop) <= 1e-10);
    double grid[61];
    for (int i = 0; i <= 60; ++i) grid[i] = info.t_h * i / 60.0;
    qd_propagation* r = NULL;
    CHECK_OK(qd_propagate(prop, grid, 61, &r));
    CHECK(qd_propagation_size(r) == 61);
    for (size_t i = 0; i < 61; ++i) {
        qd_propagation_point pt;
        CHECK_OK(qd_propagation_point_at(r, i, &pt));
        CHECK(fabs(pt.norm - 1.0) <= 1e-10);
        CHECK(fabs(pt.survival - exp(-info.gamma * pt.t)) <= 5e-3);
    }
    qd_propagation_destroy(r);
    qd_propagator_destroy(prop);
    CHECK(qd_propagator_create(m, 0, QD_SOLVER_DENSE, &prop) == QD_ERR_DOMAIN);

    const int64_t widths[3] = {50, 100, 200};
    qd_convergence* conv = NULL;
    CHECK_OK(qd_convergence_study(m, grid, 61, widths, 3, 1e-2, QD_SOLVER_ARROWHEAD, &conv));
    CHECK(qd_convergence_size(conv) == 3);
    qd_convergence_entry e0, e1, e2;
    CHECK_OK(qd_convergence_entry_at(conv, 0, &e0));
    CHECK_OK(qd_convergence_entry_at(conv, 1, &e1));
    CHECK_OK(qd_convergence_entry_at(conv, 2, &e2));
    CHECK(e0.max_deviation > e1.max_deviation);
    CHECK(e2.max_deviation == 0.0);
    CHECK(e0.edge_warning);
    int64_t smallest = 0;
    CHECK_OK(qd_convergence_smallest(conv, &smallest));
    CHECK(smallest == 50);
    qd_convergence_destroy(conv);
    CHECK_OK(qd_convergence_study(m, grid, 61, widths, 3, 0.0, QD_SOLVER_ARROWHEAD, &conv));
    CHECK_OK(qd_convergence_smallest(conv, &smallest));
    CHECK(smallest == 200);
    qd_convergence_destroy(conv);
    const int64_t only[1] = {50};
    CHECK_OK(qd_convergence_study(m, grid, 61, only, 1, -1.0, QD_SOLVER_ARROWHEAD, &conv));
    CHECK(qd_convergence_smallest(conv, &smallest) == QD_ERR_RANGE);
    qd_convergence_destroy(conv);
    qd_model_destroy(m);
}

static void test_analysis(void) {
    qd_model* m = NULL;
    CHECK_OK(qd_model_create(3.0 / 7.0, 1.0, 0.15, &m));
    qd_model_info info;
    CHECK_OK(qd_model_get_info(m, &info));
    enum { n = 800 };
    double t[n], y[n];
    for (int j = 0; j < n; ++j) {
        t[j] = info.t_h * (j + 1) / 200.0;
        CHECK_OK(qd_p_first_order(m, t[j], &y[j]));
    }
    qd_kink_report* rep = NULL;
    CHECK_OK(qd_detect_kinks(t, y, n, info.t_h, 3, NULL, &rep));
    CHECK(qd_kink_report_size(rep) == 3);
    CHECK(qd_kink_report_expected_count(rep) == 3);
    CHECK(qd_kink_report_matched_count(rep) == 3);
    CHECK(qd_kink_report_unmatched_count(rep) == 0);
    CHECK(qd_kink_report_missing_count(rep) == 0);
    for (size_t i = 0; i < 3; ++i) {
        qd_kink k;
        size_t index = 99;
        int64_t which = 0;
        CHECK_OK(qd_kink_report_matched(rep, i, &index, &which));
        CHECK_OK(qd_kink_report_kink(rep, index, &k));
        CHECK(fabs(k.location - (double)which * info.t_h) <= 0.02 * info.t_h);
        CHECK(fabs(k.right_slope - k.left_slope) > 5.0 * k.standard_error);
    }
    qd_kink k;
    CHECK(qd_kink_report_kink(rep, 3, &k) == QD_ERR_RANGE);
    qd_kink_report_destroy(rep);

    qd_kink_options opts;
    qd_kink_options_default(&opts);
    CHECK(opts.window == 0.2);
    CHECK(opts.exclusion == 0.02);
    CHECK(opts.significance == 5.0);
    double coarse_t[n / 10], coarse_y[n / 10];
    for (int j = 0; j < n / 10; ++j) {
        coarse_t[j] = t[10 * j];
        coarse_y[j] = y[10 * j];
    }
    CHECK(qd_detect_kinks(coarse_t, coarse_y, n / 10, info.t_h, 3, &opts, &rep) == QD_ERR_ANALYSIS);
    CHECK(strstr(qd_last_error(), "coarse") != NULL);
    CHECK(qd_detect_kinks(t, y, n, info.t_h, 3, NULL, NULL) == QD_ERR_NULL);

    qd_rate_fit fit;
    CHECK_OK(qd_fit_rate(t, y, n, QD_RATE_LINEAR_TRANSFER, 0.05 * info.t_h, info.t_h, info.t_h, info.gamma, &fit));
    CHECK(fit.relative_error <= 1e-10);
    CHECK(qd_fit_rate(t, y, n, QD_RATE_LINEAR_TRANSFER, 0.05, 2.0 * info.t_h, info.t_h, info.gamma, &fit) ==
          QD_ERR_ANALYSIS);

    qd_model* half = NULL;
    CHECK_OK(qd_model_with_alpha(m, 0.5, &half));
    const qd_model* models[2] = {m, half};
    qd_breakdown* table = NULL;
    CHECK_OK(qd_breakdown_scan(models, 2, 3.0, 200, &table));
    CHECK(qd_breakdown_rows(table) == 2);
    CHECK(qd_breakdown_columns(table) == 3);
    double alpha = 0.0;
    CHECK_OK(qd_breakdown_alpha(table, 1, &alpha));
    CHECK(alpha == 0.5);
    qd_breakdown_cell cell;
    CHECK_OK(qd_breakdown_cell_at(table, 1, 1, &cell));
    CHECK(close_to(cell.max_relative_deviation, 1.0, 1e-12));
    CHECK_OK(qd_breakdown_cell_at(table, 0, 0, &cell));
    CHECK(cell.max_relative_deviation <= 1e-10);
    CHECK(qd_breakdown_cell_at(table, 2, 0, &cell) == QD_ERR_RANGE);
    qd_breakdown_destroy(table);
    CHECK(qd_breakdown_scan(models, 2, 2.0, 200, &table) == QD_ERR_DOMAIN);

    const double gs[3] = {0.08, 0.04, 0.02};
    double residuals[3], exponent = 0.0, rms = 0.0;
    qd_model* scaled = NULL;
    CHECK_OK(qd_model_with_alpha(m, 0.3, &scaled));
    CHECK_OK(qd_order_scaling(scaled, 2.5 * info.t_h, gs, 3, residuals, &exponent, &rms));
    CHECK(exponent >= 3.6 && exponent <= 4.4);
    CHECK(residuals[0] > residuals[1] && residuals[1] > residuals[2]);
    const double zero = 0.0;
    CHECK_OK(qd_order_scaling(scaled, 2.5 * info.t_h, &zero, 1, residuals, &exponent, &rms));
    CHECK(residuals[0] == 0.0);
    CHECK(isnan(exponent));
    qd_model_destroy(scaled);
    qd_model_destroy(half);
    qd_model_destroy(m);
}

static void test_status(void) {
    CHECK(strcmp(qd_status_name(QD_OK), "") != 0);
    CHECK(strcmp(qd_status_name(QD_ERR_RANGE), qd_status_name(QD_ERR_NULL)) != 0);
    CHECK(strcmp(qd_version(), "0.1.0") == 0);
}

int main(void) {
    test_model();
    test_first_order();
    test_exact();
    test_propagator();
    test_analysis();
    test_status();
    printf("%d checks, %d failures\n", checks, failures);
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
