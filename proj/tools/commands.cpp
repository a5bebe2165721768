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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cli_output.hpp"
#include "qd_handles.hpp"

namespace cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kSnap = 1e-9;
const std::vector<double> kFigureAlphas{0.0, 0.25, 3.0 / 7.0, 0.5};

struct Curve {
    Model model;
    qd_model_info info{};
};

// One model per requested α. Without --alpha, an explicit E_b gives a single
// curve; otherwise the default set is used.
std::vector<Curve> build_curves(const RunConfig& cfg, const std::vector<double>& default_alphas) {
    qd_model* raw = nullptr;
    check(qd_model_create(cfg.e_b, cfg.delta, cfg.g, &raw));
    Model base(raw);
    std::vector<Curve> out;
    auto push = [&](Model m) {
        Curve c{std::move(m), {}};
        check(qd_model_get_info(c.model.get(), &c.info));
        out.push_back(std::move(c));
    };
    const std::vector<double>& alphas = cfg.alpha.empty() ? default_alphas : cfg.alpha;
    if (cfg.alpha.empty() && cfg.e_b_set) {
        push(std::move(base));
        return out;
    }
    for (double a : alphas) {
        qd_model* m = nullptr;
        check(qd_model_with_alpha(base.get(), a, &m));
        push(Model(m));
    }
    return out;
}

// t_j = j t_H / ppi for j = 0..floor(span·ppi).
std::vector<double> time_grid(double t_h, double span, std::int64_t ppi) {
    const auto count = static_cast<std::int64_t>(std::floor(span * static_cast<double>(ppi) + kSnap));
    std::vector<double> t(static_cast<std::size_t>(count) + 1);
    for (std::int64_t j = 0; j <= count; ++j)
        t[static_cast<std::size_t>(j)] = static_cast<double>(j) * t_h / static_cast<double>(ppi);
    return t;
}

bool on_boundary(std::size_t j, std::int64_t ppi) {
    return j > 0 && static_cast<std::int64_t>(j) % ppi == 0;
}

std::string suffix(std::size_t i) { return "_a" + std::to_string(i); }

ojson base_metadata(const char* command, const RunConfig& cfg, const std::vector<Curve>& curves) {
    ojson meta;
    meta["command"] = command;
    meta["config"] = echo(cfg);
    const qd_model_info& info = curves.front().info;
    meta["gamma"] = info.gamma;
    meta["t_h"] = info.t_h;
    ojson alphas = ojson::array();
    for (const Curve& c : curves) alphas.push_back(c.info.alpha);
    meta["alpha"] = alphas;
    meta["column_suffix"] = "_a<k> refers to alpha[k]";
    return meta;
}

void emit(const RunConfig& cfg, const Table& table) { write_output(cfg.out, render(table, cfg.format)); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> propagate_survival(const RunConfig& cfg, const Curve& curve, const std::vector<double>& grid,
                                       std::vector<qd_propagation_point>& points) {
    qd_propagator* raw = nullptr;
    check(qd_propagator_create(curve.model.get(), cfg.truncation_n, QD_SOLVER_ARROWHEAD, &raw));
    Propagator prop(raw);
    qd_propagation* res = nullptr;
    check(qd_propagate(prop.get(), grid.data(), grid.size(), &res));
    Propagation result(res);
    points.resize(grid.size());
    std::vector<double> survival(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        check(qd_propagation_point_at(result.get(), j, &points[j]));
        survival[j] = points[j].survival;
    }
    return survival;
}

}  // namespace

// ---- first-order ----

int run_first_order(const RunConfig& cfg) {
    validate(cfg, false);
    const std::vector<Curve> curves = build_curves(cfg, kFigureAlphas);
    const double t_h = curves.front().info.t_h;
    const std::vector<double> grid = time_grid(t_h, cfg.t_max_over_th, cfg.points_per_interval);

    Table table;
    table.metadata = base_metadata("first-order", cfg, curves);
    if (cfg.oracle) table.metadata["oracle_m"] = cfg.oracle_m;
    table.columns = {"t", "t_over_th", "T", "side"};
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (const char* name : {"W", "dW_dT", "P"}) table.columns.push_back(name + suffix(i));
        if (cfg.oracle)
            for (const char* name : {"W_direct", "tail_bound"}) table.columns.push_back(name + suffix(i));
    }

    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        double big_t = 0.0;
        std::int64_t interval = 0;
        check(qd_to_dimensionless(curves.front().model.get(), t, &big_t, &interval));
        struct PerCurve {
            double w, p, direct, tail;
        };
        std::vector<PerCurve> values(curves.size());
        for (std::size_t i = 0; i < curves.size(); ++i) {
            PerCurve& v = values[i];
            check(qd_w_alpha(big_t, curves[i].info.alpha, &v.w));
            check(qd_p_first_order(curves[i].model.get(), t, &v.p));
            if (cfg.oracle) check(qd_w_alpha_direct(big_t, curves[i].info.alpha, cfg.oracle_m, &v.direct, &v.tail));
        }
        const std::vector<std::int64_t> sides =
            on_boundary(j, cfg.points_per_interval) ? std::vector<std::int64_t>{-1, 1} : std::vector<std::int64_t>{0};
        for (std::int64_t side : sides) {
            std::vector<Cell> row{t, t / t_h, big_t, side};
            for (std::size_t i = 0; i < curves.size(); ++i) {
                double slope = 0.0;
                check(qd_w_alpha_slope(side > 0 ? interval + 1 : interval, curves[i].info.alpha, &slope));
                row.insert(row.end(), {values[i].w, slope, values[i].p});
                if (cfg.oracle) row.insert(row.end(), {values[i].direct, values[i].tail});
            }
            table.rows.push_back(std::move(row));
        }
    }
    emit(cfg, table);
    return kExitOk;
}

// ---- exact ----

int run_exact(const RunConfig& cfg) {
    validate(cfg, false);
    const double closed_span = QD_DEFAULT_MAX_ECHO + 1;
    if (cfg.t_max_over_th > closed_span + kSnap && !cfg.oracle) {
        throw CliError(kExitConfig, "requested span of " + fmt(cfg.t_max_over_th) +
                                        " t_H exceeds the closed-form range of " + fmt(closed_span) +
                                        " t_H; rerun with --oracle to use the numeric propagator");
    }
    const std::vector<Curve> curves = build_curves(cfg, kFigureAlphas);
    const double t_h = curves.front().info.t_h;
    const std::vector<double> grid = time_grid(t_h, cfg.t_max_over_th, cfg.points_per_interval);
    std::size_t closed_count = 0;
    while (closed_count < grid.size() && grid[closed_count] <= closed_span * t_h * (1.0 + 1e-12)) ++closed_count;

    Table table;
    table.metadata = base_metadata("exact", cfg, curves);
    table.metadata["closed_form_limit_over_th"] = closed_span;
    table.columns = {"t", "t_over_th", "side"};
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (const char* name : {"re_S", "im_S", "P_i", "dPi_dt"}) table.columns.push_back(name + suffix(i));
        if (cfg.oracle)
            for (const char* name : {"P_i_num", "deviation"}) table.columns.push_back(name + suffix(i));
    }

    struct CurveData {
        std::vector<qd_series_point> exact;
        std::map<std::size_t, qd_boundary> boundaries;
        std::vector<qd_propagation_point> numeric;
    };
    std::vector<CurveData> data(curves.size());
    ojson deviations = ojson::array(), norm_errors = ojson::array(), edge = ojson::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        CurveData& d = data[i];
        qd_series* raw = nullptr;
        check(qd_exact_series(curves[i].model.get(), grid.data(), closed_count, QD_DEFAULT_MAX_ECHO, &raw));
        Series series(raw);
        d.exact.resize(closed_count);
        for (std::size_t j = 0; j < closed_count; ++j) check(qd_series_point_at(series.get(), j, &d.exact[j]));
        for (std::size_t b = 0; b < qd_series_boundary_count(series.get()); ++b) {
            qd_boundary bv{};
            check(qd_series_boundary_at(series.get(), b, &bv));
            d.boundaries[bv.index] = bv;
        }
        if (cfg.oracle) {
            propagate_survival(cfg, curves[i], grid, d.numeric);
            double dev = 0.0, norm = 0.0, pop = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                if (j < closed_count) dev = std::max(dev, std::abs(d.exact[j].survival - d.numeric[j].survival));
                norm = std::max(norm, std::abs(d.numeric[j].norm - 1.0));
                pop = std::max(pop, d.numeric[j].edge_population);
            }
            deviations.push_back(dev);
            norm_errors.push_back(norm);
            edge.push_back(pop);
            if (pop > QD_EDGE_POPULATION_GUARD)
                std::cerr << "warning: alpha " << fmt(curves[i].info.alpha) << ": edge population " << fmt(pop)
                          << " exceeds " << fmt(QD_EDGE_POPULATION_GUARD) << " at N = " << cfg.truncation_n << "\n";
        }
    }
    if (cfg.oracle) {
        table.metadata["max_deviation"] = deviations;
        table.metadata["max_norm_error"] = norm_errors;
        table.metadata["max_edge_population"] = edge;
    }

    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        const std::vector<std::int64_t> sides =
            on_boundary(j, cfg.points_per_interval) ? std::vector<std::int64_t>{-1, 1} : std::vector<std::int64_t>{0};
        for (std::int64_t side : sides) {
            std::vector<Cell> row{t, t / t_h, side};
            for (std::size_t i = 0; i < curves.size(); ++i) {
                const CurveData& d = data[i];
                double p_exact = std::nan("");
                if (j < closed_count) {
                    const qd_series_point& pt = d.exact[j];
                    double re = pt.re, im = pt.im, rate = pt.survival_rate;
                    if (const auto it = d.boundaries.find(j); it != d.boundaries.end() && side > 0) {
                        re = it->second.re_right;
                        im = it->second.im_right;
                        rate = it->second.rate_right;
                    }
                    p_exact = pt.survival;
                    row.insert(row.end(), {re, im, p_exact, rate});
                } else {
                    row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{}});
                }
                if (cfg.oracle) {
                    const double p_num = d.numeric[j].survival;
                    row.push_back(p_num);
                    if (j < closed_count)
                        row.push_back(std::abs(p_exact - p_num));
                    else
                        row.push_back(std::monostate{});
                }
            }
            table.rows.push_back(std::move(row));
        }
    }
    emit(cfg, table);
    return kExitOk;
}

// ---- sampling-figure ----

int run_sampling_figure(const RunConfig& cfg) {
    validate(cfg, false);
    const std::vector<Curve> curves = build_curves(cfg, {3.0 / 7.0});
    const double big_t = cfg.sample_t;
    const std::int64_t count = cfg.sample_count;

    Table table;
    table.metadata = base_metadata("sampling-figure", cfg, curves);
    table.metadata.erase("column_suffix");
    table.metadata["sample_T"] = big_t;
    table.metadata["sample_count"] = count;
    table.columns = {"kind", "alpha", "m", "x", "sinc2"};

    // The sinc² curve on x ∈ [−(count+1)T, (count+1)T], ppi points per unit T.
    const double half = static_cast<double>(count + 1) * big_t;
    const std::int64_t steps = 2 * (count + 1) * cfg.points_per_interval;
    for (std::int64_t s = 0; s <= steps; ++s) {
        const double x = -half + 2.0 * half * static_cast<double>(s) / static_cast<double>(steps);
        double v = 0.0;
        check(qd_sinc(x, &v));
        table.rows.push_back({std::string("curve"), std::monostate{}, std::monostate{}, x, v * v});
    }

    ojson sums = ojson::array(), closed = ojson::array();
    for (const Curve& c : curves) {
        const double a = c.info.alpha;
        double total = 0.0;
        for (std::int64_t m = -count; m <= count; ++m) {
            const double x = (static_cast<double>(m) - a) * big_t;
            double v = 0.0;
            check(qd_sinc(x, &v));
            total += v * v;
            table.rows.push_back({std::string("sample"), a, m, x, v * v});
        }
        double w = 0.0;
        check(qd_w_alpha(big_t, a, &w));
        sums.push_back(total);
        closed.push_back(w / (big_t * big_t));
    }
    // Truncated sample sum against the full sum W_α(T)/T².
    table.metadata["sample_sum"] = sums;
    table.metadata["full_sum"] = closed;
    emit(cfg, table);
    return kExitOk;
}

// ---- analyze ----

namespace {

// Expected multiples whose analytic slope jump vanishes (below 1e-9 γ) are
// listed as "absent" rather than "missing".
ojson kink_json(const KinkReport& report, double t_h, double gamma, const std::map<std::int64_t, double>& analytic) {
    ojson out;
    ojson expected = ojson::array();
    for (std::size_t i = 0; i < qd_kink_report_expected_count(report.get()); ++i) {
        double e = 0.0;
        check(qd_kink_report_expected(report.get(), i, &e));
        expected.push_back(std::llround(e / t_h));
    }
    out["expected"] = expected;
    std::map<std::size_t, std::int64_t> match;
    for (std::size_t i = 0; i < qd_kink_report_matched_count(report.get()); ++i) {
        std::size_t kink = 0;
        std::int64_t k = 0;
        check(qd_kink_report_matched(report.get(), i, &kink, &k));
        match[kink] = k;
    }
    ojson detected = ojson::array();
    for (std::size_t i = 0; i < qd_kink_report_size(report.get()); ++i) {
        qd_kink kink{};
        check(qd_kink_report_kink(report.get(), i, &kink));
        const double gap = kink.right_slope - kink.left_slope;
        ojson d;
        d["location_over_th"] = kink.location / t_h;
        d["left_slope"] = kink.left_slope;
        d["right_slope"] = kink.right_slope;
        d["gap"] = gap;
        d["standard_error"] = kink.standard_error;
        d["significance"] = kink.standard_error > 0.0 ? std::abs(gap) / kink.standard_error : INFINITY;
        if (const auto it = match.find(i); it != match.end()) {
            d["k"] = it->second;
            if (const auto a = analytic.find(it->second); a != analytic.end()) d["analytic_gap"] = a->second;
        } else {
            d["k"] = nullptr;
        }
        detected.push_back(d);
    }
    out["detected"] = detected;
    ojson missing = ojson::array(), absent = ojson::array();
    for (std::size_t i = 0; i < qd_kink_report_missing_count(report.get()); ++i) {
        std::int64_t k = 0;
        check(qd_kink_report_missing(report.get(), i, &k));
        ojson m;
        m["k"] = k;
        const auto a = analytic.find(k);
        if (a != analytic.end()) {
            m["analytic_gap"] = a->second;
            if (std::abs(a->second) <= 1e-9 * gamma) {
                absent.push_back(m);
                continue;
            }
        }
        missing.push_back(m);
    }
    out["missing"] = missing;
    out["absent"] = absent;
    out["unmatched"] = qd_kink_report_unmatched_count(report.get());
    out["exact_match"] = missing.empty() && qd_kink_report_unmatched_count(report.get()) == 0;
    return out;
}

KinkReport detect(const std::vector<double>& t, const std::vector<double>& y, double t_h, std::int64_t expected) {
    qd_kink_report* raw = nullptr;
    check(qd_detect_kinks(t.data(), y.data(), t.size(), t_h, expected, nullptr, &raw));
    return KinkReport(raw);
}

ojson rate_json(const char* source, const char* mode, const qd_rate_fit& f) {
    ojson r;
    r["source"] = source;
    r["mode"] = mode;
    r["rate"] = f.rate;
    r["reference"] = f.reference;
    r["relative_error"] = f.relative_error;
    r["residual_rms"] = f.residual_rms;
    r["t_lo"] = f.t_lo;
    r["t_hi"] = f.t_hi;
    r["points"] = f.points;
    return r;
}

void flatten(const ojson& v, const std::string& path, Table& table) {
    if (v.is_object()) {
        for (const auto& [k, item] : v.items()) flatten(item, path.empty() ? k : path + "." + k, table);
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", table);
    } else if (v.is_number_float()) {
        table.rows.push_back({path, v.get<double>()});
    } else if (v.is_number()) {
        table.rows.push_back({path, v.get<std::int64_t>()});
    } else if (v.is_boolean()) {
        table.rows.push_back({path, std::string(v.get<bool>() ? "true" : "false")});
    } else if (v.is_null()) {
        table.rows.push_back({path, std::monostate{}});
    } else {
        table.rows.push_back({path, v.get<std::string>()});
    }
}

std::string kink_summary(const ojson& k) {
    std::string s;
    for (const auto& d : k["detected"]) s += (s.empty() ? "" : ", ") + fmt(d["location_over_th"].get<double>());
    if (s.empty()) s = "none";
    std::string miss;
    for (const auto& m : k["missing"]) miss += (miss.empty() ? "" : ", ") + std::to_string(m["k"].get<std::int64_t>());
    if (miss.empty()) miss = "none";
    std::string out = "at t/t_H = " + s + " (missing k: " + miss;
    if (!k["absent"].empty()) {
        std::string none;
        for (const auto& m : k["absent"]) none += (none.empty() ? "" : ", ") + std::to_string(m["k"].get<std::int64_t>());
        out += ", no jump at k: " + none;
    }
    return out + ", unmatched: " + std::to_string(k["unmatched"].get<std::size_t>()) + ")";
}

}  // namespace

int run_analyze(const RunConfig& cfg) {
    validate(cfg, true);
    const double closed_span = QD_DEFAULT_MAX_ECHO + 1;
    const bool closed = cfg.t_max_over_th <= closed_span + kSnap;
    if (!closed && !cfg.oracle)
        throw CliError(kExitConfig, "requested span exceeds the closed-form range of " + fmt(closed_span) +
                                        " t_H; rerun with --oracle to analyse the numeric propagator");
    const std::vector<Curve> curves = build_curves(cfg, kFigureAlphas);
    const double t_h = curves.front().info.t_h;
    const double gamma = curves.front().info.gamma;
    const std::vector<double> grid = time_grid(t_h, cfg.t_max_over_th, cfg.points_per_interval);
    const auto expected = static_cast<std::int64_t>(std::floor(cfg.t_max_over_th + kSnap));

    ojson report;
    report["metadata"] = base_metadata("analyze", cfg, curves);
    report["metadata"].erase("column_suffix");
    report["metadata"]["scaling_t_over_th"] = cfg.scaling_t;
    report["metadata"]["scaling_g"] = cfg.scaling_g;

    qd_validity_window window{};
    check(qd_validity_window_ideal(curves.front().model.get(), &window));
    report["validity_window"] = {{"t_min", window.t_min}, {"t_max", window.t_max},
                                 {"t_max_over_th", window.t_max / t_h}, {"nonempty", window.nonempty != 0}};

    ojson models = ojson::array();
    for (const Curve& c : curves) {
        ojson m;
        m["alpha"] = c.info.alpha;

        std::vector<double> p_first(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) check(qd_p_first_order(c.model.get(), grid[j], &p_first[j]));

        std::vector<double> p_exact;
        std::map<std::int64_t, double> exact_gaps;
        if (closed) {
            qd_series* raw = nullptr;
            check(qd_exact_series(c.model.get(), grid.data(), grid.size(), QD_DEFAULT_MAX_ECHO, &raw));
            Series series(raw);
            p_exact.resize(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j) {
                qd_series_point pt{};
                check(qd_series_point_at(series.get(), j, &pt));
                p_exact[j] = pt.survival;
            }
            for (std::size_t b = 0; b < qd_series_boundary_count(series.get()); ++b) {
                qd_boundary bv{};
                check(qd_series_boundary_at(series.get(), b, &bv));
                exact_gaps[bv.k] = bv.rate_right - bv.rate_left;
            }
        }
        std::vector<qd_propagation_point> points;
        std::vector<double> p_numeric;
        if (cfg.oracle) p_numeric = propagate_survival(cfg, c, grid, points);

        // dP/dt = (2g²/Δ) dW/dT, and W's slope changes by π(D_k − D_{k−1}) at T = kπ.
        std::map<std::int64_t, double> first_gaps;
        for (std::int64_t k = 1; k <= expected; ++k) {
            double left = 0.0, right = 0.0;
            check(qd_w_alpha_slope(k - 1, c.info.alpha, &left));
            check(qd_w_alpha_slope(k, c.info.alpha, &right));
            first_gaps[k] = 2.0 * c.info.g * c.info.g / c.info.delta * (right - left);
        }

        ojson kinks;
        kinks["first_order"] = kink_json(detect(grid, p_first, t_h, expected), t_h, gamma, first_gaps);
        if (closed) kinks["exact"] = kink_json(detect(grid, p_exact, t_h, expected), t_h, gamma, exact_gaps);
        if (cfg.oracle) kinks["numeric"] = kink_json(detect(grid, p_numeric, t_h, expected), t_h, gamma, {});
        m["kinks"] = kinks;

        ojson rates = ojson::array();
        const double t_lo = grid.size() > 1 ? grid[1] : t_h;
        auto fit = [&](const std::vector<double>& y, qd_rate_mode mode) {
            qd_rate_fit f{};
            check(qd_fit_rate(grid.data(), y.data(), grid.size(), mode, t_lo, t_h, t_h, gamma, &f));
            return f;
        };
        if (cfg.t_max_over_th + kSnap >= 1.0) {
            rates.push_back(rate_json("first_order", "linear_transfer", fit(p_first, QD_RATE_LINEAR_TRANSFER)));
            if (closed) rates.push_back(rate_json("exact", "log_survival", fit(p_exact, QD_RATE_LOG_SURVIVAL)));
            if (cfg.oracle) rates.push_back(rate_json("numeric", "log_survival", fit(p_numeric, QD_RATE_LOG_SURVIVAL)));
        }
        m["rates"] = rates;

        std::vector<double> residuals(cfg.scaling_g.size());
        double exponent = 0.0, rms = 0.0;
        check(qd_order_scaling(c.model.get(), cfg.scaling_t * t_h, cfg.scaling_g.data(), cfg.scaling_g.size(),
                               residuals.data(), &exponent, &rms));
        m["order_scaling"] = {{"t_over_th", cfg.scaling_t}, {"couplings", cfg.scaling_g}, {"residuals", residuals},
                              {"exponent", exponent}, {"fit_rms", rms}};
        models.push_back(m);
    }
    report["models"] = models;

    std::vector<const qd_model*> handles;
    for (const Curve& c : curves) handles.push_back(c.model.get());
    qd_breakdown* raw = nullptr;
    check(qd_breakdown_scan(handles.data(), handles.size(), std::max(cfg.t_max_over_th, 3.0), cfg.points_per_interval,
                            &raw));
    Breakdown table(raw);
    ojson breakdown = ojson::array();
    for (std::size_t r = 0; r < qd_breakdown_rows(table.get()); ++r) {
        double a = 0.0;
        check(qd_breakdown_alpha(table.get(), r, &a));
        ojson cells = ojson::array();
        for (std::size_t col = 0; col < qd_breakdown_columns(table.get()); ++col) {
            qd_breakdown_cell cell{};
            check(qd_breakdown_cell_at(table.get(), r, col, &cell));
            cells.push_back({{"interval", cell.interval},
                             {"max_relative_deviation", cell.max_relative_deviation},
                             {"max_absolute_deviation", cell.max_absolute_deviation},
                             {"max_ratio", cell.max_ratio},
                             {"t_at_max_over_th", cell.t_at_max / t_h}});
        }
        breakdown.push_back({{"alpha", a}, {"intervals", cells}});
    }
    report["breakdown"] = breakdown;

    if (cfg.format == "json") {
        write_output(cfg.out, report.dump(2) + "\n");
    } else {
        Table flat;
        flat.metadata = report["metadata"];
        flat.columns = {"path", "value"};
        for (const auto& [key, value] : report.items())
            if (key != "metadata") flatten(value, key, flat);
        write_output(cfg.out, render_csv(flat));
    }

    std::ostream& human = cfg.out == "-" ? std::cerr : std::cout;
    human << "g = " << fmt(cfg.g) << ", delta = " << fmt(cfg.delta) << ", gamma = " << fmt(gamma)
          << ", t_H = " << fmt(t_h) << "\n";
    human << "validity window: t_min = " << fmt(window.t_min) << ", t_max = " << fmt(window.t_max) << " ("
          << fmt(window.t_max / t_h) << " t_H)\n";
    for (std::size_t i = 0; i < models.size(); ++i) {
        const ojson& m = models[i];
        human << "alpha = " << fmt(m["alpha"].get<double>()) << "\n";
        for (const auto& [name, k] : m["kinks"].items()) human << "  " << name << " kinks " << kink_summary(k) << "\n";
        for (const auto& r : m["rates"])
            human << "  rate (" << r["source"].get<std::string>() << ", " << r["mode"].get<std::string>()
                  << "): " << fmt(r["rate"].get<double>()) << " vs gamma " << fmt(r["reference"].get<double>())
                  << ", relative error " << fmt(r["relative_error"].get<double>()) << "\n";
        const ojson& cells = breakdown[i]["intervals"];
        human << "  golden-rule deviation per interval:";
        for (const auto& cell : cells) human << " " << fmt(cell["max_relative_deviation"].get<double>());
        human << "\n";
        const ojson& s = m["order_scaling"];
        const ojson& p = s["exponent"];
        human << "  order scaling at t = " << fmt(cfg.scaling_t) << " t_H: p = "
              << (p.is_number() ? fmt(p.get<double>()) : std::string("n/a")) << "\n";
    }
    return kExitOk;
}

// ---- convergence ----

int run_convergence(const RunConfig& cfg) {
    validate(cfg, false);
    const std::vector<Curve> curves = build_curves(cfg, kFigureAlphas);
    const double t_h = curves.front().info.t_h;
    const std::vector<double> grid = time_grid(t_h, cfg.t_max_over_th, cfg.points_per_interval);

    Table table;
    table.metadata = base_metadata("convergence", cfg, curves);
    table.metadata.erase("column_suffix");
    table.metadata["n_list"] = cfg.n_list;
    table.metadata["reference_n"] = cfg.n_list.back();
    table.metadata["tolerance"] = cfg.tolerance;
    table.metadata["edge_population_guard"] = QD_EDGE_POPULATION_GUARD;
    table.columns = {"alpha", "N", "max_deviation", "max_edge_population", "edge_warning", "converged"};

    ojson smallest = ojson::array();
    for (const Curve& c : curves) {
        qd_convergence* raw = nullptr;
        check(qd_convergence_study(c.model.get(), grid.data(), grid.size(), cfg.n_list.data(), cfg.n_list.size(),
                                   cfg.tolerance, QD_SOLVER_ARROWHEAD, &raw));
        Convergence report(raw);
        for (std::size_t i = 0; i < qd_convergence_size(report.get()); ++i) {
            qd_convergence_entry e{};
            check(qd_convergence_entry_at(report.get(), i, &e));
            table.rows.push_back({c.info.alpha, e.half_width, e.max_deviation, e.max_edge_population,
                                  static_cast<std::int64_t>(e.edge_warning),
                                  static_cast<std::int64_t>(e.max_deviation <= cfg.tolerance)});
            if (e.edge_warning)
                std::cerr << "warning: alpha " << fmt(c.info.alpha) << ", N = " << e.half_width
                          << ": edge population " << fmt(e.max_edge_population) << " exceeds "
                          << fmt(QD_EDGE_POPULATION_GUARD) << "\n";
        }
        std::int64_t n = 0;
        if (qd_convergence_smallest(report.get(), &n) == QD_OK)
            smallest.push_back(n);
        else
            smallest.push_back(nullptr);
    }
    table.metadata["smallest_converged_n"] = smallest;
    emit(cfg, table);
    return kExitOk;
}

}  // namespace cli
