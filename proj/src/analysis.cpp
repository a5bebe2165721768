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

#include "quasidecay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "quasidecay/errors.hpp"
#include "quasidecay/exact_dyson.hpp"
#include "quasidecay/first_order.hpp"

namespace quasidecay {

namespace {

constexpr std::size_t kMinSidePoints = 5;
constexpr std::size_t kMinRatePoints = 20;
constexpr double kRateWarmup = 0.05;
constexpr double kWindowShrink[] = {1.0, 0.5, 0.25};

struct SideFit {
    double value = 0.0;
    double slope = 0.0;
    double error = 0.0;
    bool ok = false;
};

// Quadratic least squares in u = (t − centre)/scale over the index range
// [first, last); returns dy/dt at the centre and its standard error.
SideFit quadratic_slope(std::span<const double> t, std::span<const double> y, std::size_t first, std::size_t last,
                        double centre, double scale) {
    SideFit out;
    const auto n = static_cast<Eigen::Index>(last - first);
    if (n < static_cast<Eigen::Index>(kMinSidePoints)) return out;
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = (t[first + static_cast<std::size_t>(i)] - centre) / scale;
        design(i, 0) = 1.0;
        design(i, 1) = u;
        design(i, 2) = u * u;
        rhs(i) = y[first + static_cast<std::size_t>(i)];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    const Eigen::Vector3d coef = qr.solve(rhs);
    const double rss = (design * coef - rhs).squaredNorm();
    const Eigen::Matrix3d normal_inv = (design.transpose() * design).inverse();
    const double sigma2 = rss / static_cast<double>(n - 3);
    out.value = coef(0);
    out.slope = coef(1) / scale;
    out.error = std::sqrt(std::max(0.0, sigma2 * normal_inv(1, 1))) / scale;
    out.ok = std::isfinite(out.slope) && std::isfinite(out.error);
    return out;
}

void check_curve(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw AnalysisError("curve abscissae and values differ in length");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw AnalysisError("curve contains non-finite values");
        if (i > 0 && !(t[i] > t[i - 1])) throw AnalysisError("curve abscissae must be strictly increasing");
    }
}

}  // namespace

KinkReport detect_kinks(std::span<const double> t, std::span<const double> y, double period,
                        std::int64_t expected_count, const KinkOptions& options) {
    check_curve(t, y);
    if (!(period > 0.0)) throw AnalysisError("period must be positive");
    if (t.size() < 3) throw AnalysisError("curve needs at least three points");
    const double span_periods = (t.back() - t.front()) / period;
    const double density = static_cast<double>(t.size() - 1) / span_periods;
    if (density < options.min_points_per_period)
        throw AnalysisError("grid too coarse for kink detection: " + std::to_string(density) +
                            " points per period, need " + std::to_string(options.min_points_per_period));

    const double window = options.window * period;
    const double exclusion = options.exclusion * period;
    const auto [y_min, y_max] = std::minmax_element(y.begin(), y.end());
    const double y_scale = (*y_max - *y_min) / period;

    KinkReport report;
    for (std::int64_t k = 1; k <= expected_count; ++k) {
        const double c = static_cast<double>(k) * period;
        if (c - window >= t.front() && c + window <= t.back()) report.expected.push_back(c);
    }

    const auto lower = [&](double v) {
        return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), v) - t.begin());
    };
    const auto upper = [&](double v) {
        return static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), v) - t.begin());
    };

    // Jump between neighbouring chord slopes: about f''h on smooth stretches,
    // about the slope gap itself next to a kink.
    std::vector<double> jump(t.size(), 0.0);
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        jump[i] = std::abs((y[i + 1] - y[i]) / (t[i + 1] - t[i]) - (y[i] - y[i - 1]) / (t[i] - t[i - 1]));
    }

    std::vector<double> scratch;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double c = t[i];
        if (c - window < t.front() || c + window > t.back()) continue;
        const std::size_t first = std::max<std::size_t>(1, lower(c - window));
        const std::size_t last = std::min(t.size() - 1, upper(c + window));

        // Screening: the strongest chord-slope jump of its neighbourhood, and
        // an outlier against the neighbourhood median.
        bool strongest = true;
        for (std::size_t j = first; j < last && strongest; ++j)
            if (jump[j] > jump[i] || (jump[j] == jump[i] && j < i)) strongest = false;
        if (!strongest) continue;
        scratch.assign(jump.begin() + static_cast<std::ptrdiff_t>(first), jump.begin() + static_cast<std::ptrdiff_t>(last));
        std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2), scratch.end());
        const double background = scratch[scratch.size() / 2];
        if (!(jump[i] > options.outlier_factor * background)) continue;

        // Confirmation: two-sided local fits. Strong curvature between kinks
        // biases wide windows, so narrower ones are tried too and the most
        // significant pair wins.
        const double step = std::max(t[i + 1] - t[i], t[i] - t[i - 1]);
        SideFit left, right;
        double best = -1.0;
        for (const double shrink : kWindowShrink) {
            const double w = window * shrink;
            const double e = std::max(exclusion * shrink, 1.01 * step);
            if (!(e < w)) break;
            const SideFit l = quadratic_slope(t, y, lower(c - w), upper(c - e), c, w);
            const SideFit r = quadratic_slope(t, y, lower(c + e), upper(c + w), c, w);
            if (!l.ok || !r.ok) continue;
            const double se = std::hypot(l.error, r.error);
            const double score = se > 0.0 ? std::abs(r.slope - l.slope) / se : std::numeric_limits<double>::infinity();
            if (score > best) {
                best = score;
                left = l;
                right = r;
            }
        }
        if (best < 0.0) continue;
        Kink kink{c, left.slope, right.slope, std::hypot(left.error, right.error)};
        const double floor = options.relative_floor * (std::abs(left.slope) + std::abs(right.slope) + y_scale);
        const double gap = std::abs(kink.gap());
        if (!(gap > options.significance * kink.standard_error && gap > floor)) continue;

        // Where the two local models meet, if that is within one grid step.
        const double shift = (left.value - right.value) / (right.slope - left.slope);
        if (std::isfinite(shift) && std::abs(shift) <= step) kink.location = c + shift;
        report.kinks.push_back(kink);
    }

    std::vector<bool> taken(report.expected.size(), false);
    for (std::size_t i = 0; i < report.kinks.size(); ++i) {
        bool matched = false;
        for (std::size_t k = 0; k < report.expected.size(); ++k) {
            if (!taken[k] && std::abs(report.kinks[i].location - report.expected[k]) <= options.match_tolerance * period) {
                taken[k] = true;
                report.matched.emplace_back(i, static_cast<std::int64_t>(std::llround(report.expected[k] / period)));
                matched = true;
                break;
            }
        }
        if (!matched) report.unmatched.push_back(i);
    }
    for (std::size_t k = 0; k < report.expected.size(); ++k)
        if (!taken[k]) report.missing.push_back(std::llround(report.expected[k] / period));
    return report;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) throw AnalysisError("line fit needs at least three paired points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw AnalysisError("degenerate fit window");
    LineFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (out.intercept + out.slope * x[i]);
        rss += r * r;
    }
    out.residual_rms = std::sqrt(rss / n);
    out.slope_error = std::sqrt(rss / (n - 2.0) / sxx);
    return out;
}

double RateFit::relative_error() const {
    if (reference == 0.0) return std::abs(rate);
    return std::abs(rate - reference) / std::abs(reference);
}

RateFit fit_rate(std::span<const double> t, std::span<const double> y, RateMode mode, double t_lo, double t_hi,
                 double t_h, double reference) {
    check_curve(t, y);
    if (!(t_lo > 0.0 && t_lo < t_hi && t_hi <= t_h * (1.0 + 1e-12)))
        throw AnalysisError("rate fit window must lie inside (0, t_H]");
    const double start = t_lo + kRateWarmup * (t_hi - t_lo);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < start || t[i] > t_hi) continue;
        double v = y[i];
        if (mode == RateMode::LogSurvival) {
            if (!(v > 0.0)) throw AnalysisError("log-survival fit needs positive survival probabilities");
            v = -std::log(v);
        }
        xs.push_back(t[i]);
        ys.push_back(v);
    }
    if (xs.size() < kMinRatePoints)
        throw AnalysisError("rate fit window holds " + std::to_string(xs.size()) + " points, need " +
                            std::to_string(kMinRatePoints));
    const LineFit line = fit_line(xs, ys);
    RateFit out;
    out.rate = line.slope;
    out.t_lo = t_lo;
    out.t_hi = t_hi;
    out.residual_rms = line.residual_rms;
    out.reference = reference;
    out.points = xs.size();
    return out;
}

std::vector<BreakdownRow> breakdown_scan(std::span<const ModelParams> models, double t_max_over_th,
                                         std::int64_t points_per_interval) {
    if (!(t_max_over_th >= 3.0)) throw DomainError("breakdown scan must cover at least three Heisenberg times");
    if (points_per_interval < 1) throw DomainError("points per interval must be positive");
    const auto intervals = static_cast<std::int64_t>(std::ceil(t_max_over_th - 1e-12));
    std::vector<BreakdownRow> rows;
    for (const ModelParams& params : models) {
        BreakdownRow row;
        row.alpha = params.alpha;
        row.cells.resize(static_cast<std::size_t>(intervals));
        for (std::int64_t k = 0; k < intervals; ++k) row.cells[static_cast<std::size_t>(k)].interval = k;
        const std::int64_t total = static_cast<std::int64_t>(std::llround(t_max_over_th * static_cast<double>(points_per_interval)));
        for (std::int64_t j = 1; j <= total; ++j) {
            const double t = static_cast<double>(j) * params.t_h / static_cast<double>(points_per_interval);
            const std::int64_t k = std::min(interval_index(t, params.t_h), intervals - 1);
            BreakdownCell& cell = row.cells[static_cast<std::size_t>(k)];
            const double p = p_ideal_first_order(params, t);
            const double line = params.gamma * t;
            const double absolute = std::abs(p - line);
            const double relative = line > 0.0 ? absolute / line : 0.0;
            const double ratio = line > 0.0 ? p / line : 0.0;
            cell.max_absolute_deviation = std::max(cell.max_absolute_deviation, absolute);
            cell.max_ratio = std::max(cell.max_ratio, ratio);
            if (relative > cell.max_relative_deviation || cell.t_at_max == 0.0) {
                cell.max_relative_deviation = relative;
                cell.t_at_max = t;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

OrderScaling order_scaling(const ModelParams& params, double t, std::span<const double> couplings) {
    if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and non-negative");
    OrderScaling out;
    out.t = t;
    const int echoes = static_cast<int>(std::max<std::int64_t>(kDefaultMaxEcho, interval_index(t, params.t_h)));
    std::vector<double> log_g, log_r;
    for (double g : couplings) {
        const ModelParams p = with_coupling(params, g);
        const double exact_transfer = 1.0 - std::norm(SurvivalAmplitude(p, echoes)(t));
        const double residual = std::abs(exact_transfer - p_ideal_first_order(p, t));
        out.couplings.push_back(g);
        out.residuals.push_back(residual);
        if (g > 0.0 && residual > 0.0) {
            log_g.push_back(std::log(g));
            log_r.push_back(std::log(residual));
        }
    }
    out.exponent = std::numeric_limits<double>::quiet_NaN();
    if (log_g.size() == 2) {
        out.exponent = (log_r[1] - log_r[0]) / (log_g[1] - log_g[0]);
    } else if (log_g.size() > 2) {
        const LineFit line = fit_line(log_g, log_r);
        out.exponent = line.slope;
        out.fit_rms = line.residual_rms;
    }
    return out;
}

}  // namespace quasidecay
