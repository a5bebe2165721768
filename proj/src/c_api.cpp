// Copyright 2026 The quasidecay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quasidecay/quasidecay.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "quasidecay/analysis.hpp"
#include "quasidecay/errors.hpp"
#include "quasidecay/exact_dyson.hpp"
#include "quasidecay/first_order.hpp"
#include "quasidecay/model.hpp"
#include "quasidecay/propagator.hpp"

namespace qd = quasidecay;

struct qd_model {
    qd::ModelParams params;
};
struct qd_series {
    qd::AmplitudeSeries series;
};
struct qd_propagator {
    qd::PropagatorState state;
};
struct qd_propagation {
    qd::PropagationResult result;
};
struct qd_convergence {
    qd::ConvergenceReport report;
};
struct qd_kink_report {
    qd::KinkReport report;
};
struct qd_breakdown {
    std::vector<qd::BreakdownRow> rows;
};

namespace {

thread_local std::string last_error;

qd_status fail(qd_status status, const char* message) {
    last_error = message;
    return status;
}

// Runs body and turns every escaping exception into a status.
template <class F>
qd_status guarded(F&& body) {
    try {
        body();
        return QD_OK;
    } catch (const qd::ParameterError& e) {
        return fail(QD_ERR_PARAMETER, e.what());
    } catch (const qd::DomainError& e) {
        return fail(QD_ERR_DOMAIN, e.what());
    } catch (const qd::NumericalError& e) {
        return fail(QD_ERR_NUMERICAL, e.what());
    } catch (const qd::AnalysisError& e) {
        return fail(QD_ERR_ANALYSIS, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QD_ERR_INTERNAL, "unknown failure");
    }
}

#define QD_REQUIRE(ptr)                                                          \
    do {                                                                         \
        if ((ptr) == nullptr) return fail(QD_ERR_NULL, #ptr " must not be NULL"); \
    } while (0)

#define QD_INDEX(i, n)                                                         \
    do {                                                                       \
        if ((i) >= (n)) return fail(QD_ERR_RANGE, "index " #i " out of range"); \
    } while (0)

std::span<const double> view(const double* data, std::size_t count) {
    return data ? std::span<const double>(data, count) : std::span<const double>();
}

}  // namespace

extern "C" {

const char* qd_last_error(void) { return last_error.c_str(); }

const char* qd_status_name(qd_status status) {
    switch (status) {
        case QD_OK: return "ok";
        case QD_ERR_PARAMETER: return "parameter error";
        case QD_ERR_DOMAIN: return "domain error";
        case QD_ERR_NUMERICAL: return "numerical error";
        case QD_ERR_ANALYSIS: return "analysis error";
        case QD_ERR_NULL: return "null pointer";
        case QD_ERR_RANGE: return "index out of range";
        case QD_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* qd_version(void) { return "0.1.0"; }

// ---- model ----

qd_status qd_model_create(double e_b, double delta, double g, qd_model** out) {
    QD_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new qd_model{qd::derive_params(e_b, delta, g)}; });
}

qd_status qd_model_with_alpha(const qd_model* model, double alpha, qd_model** out) {
    QD_REQUIRE(model);
    QD_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new qd_model{qd::with_alpha(model->params, alpha)}; });
}

qd_status qd_model_with_coupling(const qd_model* model, double g, qd_model** out) {
    QD_REQUIRE(model);
    QD_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new qd_model{qd::with_coupling(model->params, g)}; });
}

void qd_model_destroy(qd_model* model) { delete model; }

qd_status qd_model_get_info(const qd_model* model, qd_model_info* out) {
    QD_REQUIRE(model);
    QD_REQUIRE(out);
    const qd::ModelParams& p = model->params;
    *out = {p.e_b, p.delta, p.g, p.alpha, p.theta, p.gamma, p.t_h};
    return QD_OK;
}

qd_status qd_to_dimensionless(const qd_model* model, double t, double* big_t, int64_t* interval) {
    QD_REQUIRE(model);
    return guarded([&] {
        const qd::DimensionlessTime d = qd::to_dimensionless(t, model->params);
        if (big_t) *big_t = d.value;
        if (interval) *interval = d.interval;
    });
}

// ---- first order ----

qd_status qd_sinc(double x, double* out) {
    QD_REQUIRE(out);
    return guarded([&] { *out = qd::sinc(x); });
}

qd_status qd_dirichlet_kernel(int64_t m, double theta, double* out) {
    QD_REQUIRE(out);
    return guarded([&] { *out = qd::dirichlet_kernel(m, theta); });
}

qd_status qd_w_alpha(double big_t, double alpha, double* out) {
    QD_REQUIRE(out);
    return guarded([&] { *out = qd::w_alpha(big_t, alpha); });
}

qd_status qd_w_alpha_slope(int64_t m, double alpha, double* out) {
    QD_REQUIRE(out);
    return guarded([&] { *out = qd::w_alpha_slope(m, alpha); });
}

qd_status qd_w_alpha_at_multiple(int64_t m, double alpha, double* out) {
    QD_REQUIRE(out);
    return guarded([&] { *out = qd::w_alpha_at_multiple(m, alpha); });
}

qd_status qd_w_alpha_direct(double big_t, double alpha, int64_t truncation, double* value, double* tail_bound) {
    QD_REQUIRE(value);
    return guarded([&] {
        const qd::DirectSum s = qd::w_alpha_direct(big_t, alpha, truncation);
        *value = s.value;
        if (tail_bound) *tail_bound = s.tail_bound;
    });
}

qd_status qd_p_first_order(const qd_model* model, double t, double* out) {
    QD_REQUIRE(model);
    QD_REQUIRE(out);
    return guarded([&] { *out = qd::p_ideal_first_order(model->params, t); });
}

qd_status qd_p_first_order_levels(const double* energies, const double* couplings, size_t count, double e_b,
                                  double t, double* out) {
    QD_REQUIRE(out);
    if (count > 0) {
        QD_REQUIRE(energies);
        QD_REQUIRE(couplings);
    }
    return guarded([&] {
        qd::SpectrumSpec spec;
        spec.levels.reserve(count);
        for (size_t i = 0; i < count; ++i) spec.levels.push_back({energies[i], couplings[i]});
        *out = qd::p_first_order_generic(spec, e_b, t);
    });
}

qd_status qd_p_first_order_band(double density, double coupling, double a, double b, double e_b, double t,
                                double rel_tol, double* value, double* error_estimate) {
    QD_REQUIRE(value);
    return guarded([&] {
        const qd::QuadratureResult r = qd::p_first_order_integral([density](double) { return density; },
                                                                  [coupling](double) { return coupling; }, a, b,
                                                                  e_b, t, rel_tol);
        *value = r.value;
        if (error_estimate) *error_estimate = r.error_estimate;
    });
}

qd_status qd_golden_rule_rate(double density, double coupling, double* out) {
    QD_REQUIRE(out);
    return guarded([&] { *out = qd::golden_rule_rate(density, coupling); });
}

qd_status qd_validity_window_ideal(const qd_model* model, qd_validity_window* out) {
    QD_REQUIRE(model);
    QD_REQUIRE(out);
    return guarded([&] {
        const qd::SpectrumSpec spec = qd::ideal_spectrum(model->params, 0);
        const qd::ValidityWindow w = qd::validity_window(spec, model->params.e_b);
        *out = {w.t_min, w.t_max, w.nonempty ? 1 : 0};
    });
}

qd_status qd_validity_window_band(double lower, double upper, double density, double e_b, qd_validity_window* out) {
    QD_REQUIRE(out);
    return guarded([&] {
        qd::SpectrumSpec spec;
        spec.band_lower = lower;
        spec.band_upper = upper;
        spec.density = [density](double) { return density; };
        spec.validate();
        const qd::ValidityWindow w = qd::validity_window(spec, e_b);
        *out = {w.t_min, w.t_max, w.nonempty ? 1 : 0};
    });
}

// ---- exact amplitude ----

qd_status qd_survival_amplitude(const qd_model* model, double t, int k_max, double* re, double* im) {
    QD_REQUIRE(model);
    QD_REQUIRE(re);
    QD_REQUIRE(im);
    return guarded([&] {
        const qd::Complex s = qd::SurvivalAmplitude(model->params, k_max)(t);
        *re = s.real();
        *im = s.imag();
    });
}

qd_status qd_echo_polynomial(int k, double x, double* out) {
    QD_REQUIRE(out);
    return guarded([&] {
        if (k < 0 || k > qd::kMaxSupportedEcho) throw qd::DomainError("echo index out of range");
        *out = qd::interval_terms(k).back()(x);
    });
}

qd_status qd_echo_polynomial_laguerre(int k, double x, double* out) {
    QD_REQUIRE(out);
    return guarded([&] {
        if (k < 0) throw qd::DomainError("echo index must be non-negative");
        *out = qd::echo_polynomial_laguerre(k, x);
    });
}

qd_status qd_generalized_laguerre(int n, double a, double x, double* out) {
    QD_REQUIRE(out);
    return guarded([&] { *out = qd::generalized_laguerre(n, a, x); });
}

qd_status qd_exact_series(const qd_model* model, const double* grid, size_t count, int k_max, qd_series** out) {
    QD_REQUIRE(model);
    QD_REQUIRE(out);
    *out = nullptr;
    if (count > 0) QD_REQUIRE(grid);
    return guarded([&] {
        *out = new qd_series{qd::survival_probability_series(model->params, view(grid, count), k_max)};
    });
}

void qd_series_destroy(qd_series* series) { delete series; }

size_t qd_series_size(const qd_series* series) { return series ? series->series.times.size() : 0; }

qd_status qd_series_point_at(const qd_series* series, size_t i, qd_series_point* out) {
    QD_REQUIRE(series);
    QD_REQUIRE(out);
    const qd::AmplitudeSeries& s = series->series;
    QD_INDEX(i, s.times.size());
    *out = {s.times[i], s.amplitudes[i].real(), s.amplitudes[i].imag(), s.survival[i], s.survival_rate[i],
            s.interval_ids[i]};
    return QD_OK;
}

size_t qd_series_boundary_count(const qd_series* series) { return series ? series->series.boundaries.size() : 0; }

qd_status qd_series_boundary_at(const qd_series* series, size_t i, qd_boundary* out) {
    QD_REQUIRE(series);
    QD_REQUIRE(out);
    QD_INDEX(i, series->series.boundaries.size());
    const qd::BoundaryValue& b = series->series.boundaries[i];
    *out = {b.index,
            b.k,
            b.amplitude_left.real(),
            b.amplitude_left.imag(),
            b.amplitude_right.real(),
            b.amplitude_right.imag(),
            b.rate_left,
            b.rate_right};
    return QD_OK;
}

// ---- numeric propagator ----

qd_status qd_propagator_create(const qd_model* model, int64_t half_width, qd_solver solver, qd_propagator** out) {
    QD_REQUIRE(model);
    QD_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        const auto which = solver == QD_SOLVER_DENSE ? qd::EigenSolver::Dense : qd::EigenSolver::Arrowhead;
        *out = new qd_propagator{qd::PropagatorState::build(model->params, half_width, which)};
    });
}

void qd_propagator_destroy(qd_propagator* propagator) { delete propagator; }

size_t qd_propagator_dimension(const qd_propagator* propagator) {
    return propagator ? static_cast<size_t>(propagator->state.dimension()) : 0;
}

double qd_propagator_orthogonality_error(const qd_propagator* propagator) {
    return propagator ? propagator->state.orthogonality_error() : std::numeric_limits<double>::quiet_NaN();
}

qd_status qd_propagate(const qd_propagator* propagator, const double* grid, size_t count, qd_propagation** out) {
    QD_REQUIRE(propagator);
    QD_REQUIRE(out);
    *out = nullptr;
    if (count > 0) QD_REQUIRE(grid);
    return guarded([&] { *out = new qd_propagation{qd::propagate(propagator->state, view(grid, count))}; });
}

void qd_propagation_destroy(qd_propagation* result) { delete result; }

size_t qd_propagation_size(const qd_propagation* result) { return result ? result->result.times.size() : 0; }

qd_status qd_propagation_point_at(const qd_propagation* result, size_t i, qd_propagation_point* out) {
    QD_REQUIRE(result);
    QD_REQUIRE(out);
    const qd::PropagationResult& r = result->result;
    QD_INDEX(i, r.times.size());
    *out = {r.times[i],          r.survival[i],           r.transferred[i],       r.norm[i],
            r.edge_population[i], r.amplitude[i].real(), r.amplitude[i].imag()};
    return QD_OK;
}

qd_status qd_convergence_study(const qd_model* model, const double* grid, size_t count, const int64_t* half_widths,
                               size_t n_widths, double tolerance, qd_solver solver, qd_convergence** out) {
    QD_REQUIRE(model);
    QD_REQUIRE(out);
    *out = nullptr;
    if (count > 0) QD_REQUIRE(grid);
    if (n_widths > 0) QD_REQUIRE(half_widths);
    return guarded([&] {
        const auto which = solver == QD_SOLVER_DENSE ? qd::EigenSolver::Dense : qd::EigenSolver::Arrowhead;
        const std::span<const std::int64_t> widths(half_widths, n_widths);
        *out = new qd_convergence{qd::convergence_study(model->params, view(grid, count), widths, tolerance, which)};
    });
}

void qd_convergence_destroy(qd_convergence* report) { delete report; }

size_t qd_convergence_size(const qd_convergence* report) { return report ? report->report.entries.size() : 0; }

qd_status qd_convergence_entry_at(const qd_convergence* report, size_t i, qd_convergence_entry* out) {
    QD_REQUIRE(report);
    QD_REQUIRE(out);
    QD_INDEX(i, report->report.entries.size());
    const qd::ConvergenceEntry& e = report->report.entries[i];
    *out = {e.half_width, e.max_deviation, e.max_edge_population, e.edge_warning ? 1 : 0};
    return QD_OK;
}

qd_status qd_convergence_smallest(const qd_convergence* report, int64_t* out) {
    QD_REQUIRE(report);
    QD_REQUIRE(out);
    if (!report->report.smallest_converged) return fail(QD_ERR_RANGE, "no truncation met the tolerance");
    *out = *report->report.smallest_converged;
    return QD_OK;
}

// ---- analysis ----

void qd_kink_options_default(qd_kink_options* out) {
    if (!out) return;
    const qd::KinkOptions o;
    *out = {o.window,          o.exclusion,       o.significance,  o.match_tolerance,
            o.min_points_per_period, o.outlier_factor, o.relative_floor};
}

qd_status qd_detect_kinks(const double* t, const double* y, size_t count, double period, int64_t expected_count,
                          const qd_kink_options* options, qd_kink_report** out) {
    QD_REQUIRE(out);
    *out = nullptr;
    if (count > 0) {
        QD_REQUIRE(t);
        QD_REQUIRE(y);
    }
    return guarded([&] {
        qd::KinkOptions o;
        if (options) {
            o.window = options->window;
            o.exclusion = options->exclusion;
            o.significance = options->significance;
            o.match_tolerance = options->match_tolerance;
            o.min_points_per_period = options->min_points_per_period;
            o.outlier_factor = options->outlier_factor;
            o.relative_floor = options->relative_floor;
        }
        *out = new qd_kink_report{qd::detect_kinks(view(t, count), view(y, count), period, expected_count, o)};
    });
}

void qd_kink_report_destroy(qd_kink_report* report) { delete report; }

size_t qd_kink_report_size(const qd_kink_report* report) { return report ? report->report.kinks.size() : 0; }

qd_status qd_kink_report_kink(const qd_kink_report* report, size_t i, qd_kink* out) {
    QD_REQUIRE(report);
    QD_REQUIRE(out);
    QD_INDEX(i, report->report.kinks.size());
    const qd::Kink& k = report->report.kinks[i];
    *out = {k.location, k.left_slope, k.right_slope, k.standard_error};
    return QD_OK;
}

size_t qd_kink_report_expected_count(const qd_kink_report* report) {
    return report ? report->report.expected.size() : 0;
}

qd_status qd_kink_report_expected(const qd_kink_report* report, size_t i, double* out) {
    QD_REQUIRE(report);
    QD_REQUIRE(out);
    QD_INDEX(i, report->report.expected.size());
    *out = report->report.expected[i];
    return QD_OK;
}

size_t qd_kink_report_matched_count(const qd_kink_report* report) {
    return report ? report->report.matched.size() : 0;
}

qd_status qd_kink_report_matched(const qd_kink_report* report, size_t i, size_t* kink, int64_t* k) {
    QD_REQUIRE(report);
    QD_INDEX(i, report->report.matched.size());
    if (kink) *kink = report->report.matched[i].first;
    if (k) *k = report->report.matched[i].second;
    return QD_OK;
}

size_t qd_kink_report_unmatched_count(const qd_kink_report* report) {
    return report ? report->report.unmatched.size() : 0;
}

qd_status qd_kink_report_unmatched(const qd_kink_report* report, size_t i, size_t* kink) {
    QD_REQUIRE(report);
    QD_REQUIRE(kink);
    QD_INDEX(i, report->report.unmatched.size());
    *kink = report->report.unmatched[i];
    return QD_OK;
}

size_t qd_kink_report_missing_count(const qd_kink_report* report) {
    return report ? report->report.missing.size() : 0;
}

qd_status qd_kink_report_missing(const qd_kink_report* report, size_t i, int64_t* k) {
    QD_REQUIRE(report);
    QD_REQUIRE(k);
    QD_INDEX(i, report->report.missing.size());
    *k = report->report.missing[i];
    return QD_OK;
}

qd_status qd_fit_rate(const double* t, const double* y, size_t count, qd_rate_mode mode, double t_lo, double t_hi,
                      double t_h, double reference, qd_rate_fit* out) {
    QD_REQUIRE(out);
    if (count > 0) {
        QD_REQUIRE(t);
        QD_REQUIRE(y);
    }
    return guarded([&] {
        const auto m = mode == QD_RATE_LOG_SURVIVAL ? qd::RateMode::LogSurvival : qd::RateMode::LinearTransfer;
        const qd::RateFit f = qd::fit_rate(view(t, count), view(y, count), m, t_lo, t_hi, t_h, reference);
        *out = {f.rate, f.t_lo, f.t_hi, f.residual_rms, f.reference, f.relative_error(), f.points};
    });
}

qd_status qd_breakdown_scan(const qd_model* const* models, size_t count, double t_max_over_th,
                            int64_t points_per_interval, qd_breakdown** out) {
    QD_REQUIRE(out);
    *out = nullptr;
    if (count > 0) QD_REQUIRE(models);
    for (size_t i = 0; i < count; ++i)
        if (!models[i]) return fail(QD_ERR_NULL, "models[i] must not be NULL");
    return guarded([&] {
        std::vector<qd::ModelParams> params;
        params.reserve(count);
        for (size_t i = 0; i < count; ++i) params.push_back(models[i]->params);
        *out = new qd_breakdown{qd::breakdown_scan(params, t_max_over_th, points_per_interval)};
    });
}

void qd_breakdown_destroy(qd_breakdown* table) { delete table; }

size_t qd_breakdown_rows(const qd_breakdown* table) { return table ? table->rows.size() : 0; }

size_t qd_breakdown_columns(const qd_breakdown* table) {
    return table && !table->rows.empty() ? table->rows.front().cells.size() : 0;
}

qd_status qd_breakdown_alpha(const qd_breakdown* table, size_t row, double* out) {
    QD_REQUIRE(table);
    QD_REQUIRE(out);
    QD_INDEX(row, table->rows.size());
    *out = table->rows[row].alpha;
    return QD_OK;
}

qd_status qd_breakdown_cell_at(const qd_breakdown* table, size_t row, size_t column, qd_breakdown_cell* out) {
    QD_REQUIRE(table);
    QD_REQUIRE(out);
    QD_INDEX(row, table->rows.size());
    QD_INDEX(column, table->rows[row].cells.size());
    const qd::BreakdownCell& c = table->rows[row].cells[column];
    *out = {c.interval, c.max_relative_deviation, c.max_absolute_deviation, c.max_ratio, c.t_at_max};
    return QD_OK;
}

qd_status qd_order_scaling(const qd_model* model, double t, const double* couplings, size_t count,
                           double* residuals, double* exponent, double* fit_rms) {
    QD_REQUIRE(model);
    if (count > 0) {
        QD_REQUIRE(couplings);
        QD_REQUIRE(residuals);
    }
    return guarded([&] {
        const qd::OrderScaling s = qd::order_scaling(model->params, t, view(couplings, count));
        for (size_t i = 0; i < count; ++i) residuals[i] = s.residuals[i];
        if (exponent) *exponent = s.exponent;
        if (fit_rms) *fit_rms = s.fit_rms;
    });
}

}  // extern "C"
