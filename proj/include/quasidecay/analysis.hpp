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

#ifndef QUASIDECAY_ANALYSIS_HPP
#define QUASIDECAY_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "quasidecay/model.hpp"

namespace quasidecay {

struct KinkOptions {
    double window = 0.2;           // fit window on each side, in periods
    double exclusion = 0.02;       // gap left out around the candidate, in periods
    double significance = 5.0;     // required |gap| / standard error
    double match_tolerance = 0.02; // detected vs expected location, in periods
    double min_points_per_period = 50.0;
    // A candidate's chord-slope jump must exceed this multiple of the median
    // jump in its neighbourhood.
    double outlier_factor = 10.0;
    // Gaps below relative_floor · (|left| + |right| + range(y)/period) are
    // treated as roundoff, whatever the fit error says.
    double relative_floor = 1e-8;
};

struct Kink {
    double location = 0.0;
    double left_slope = 0.0;
    double right_slope = 0.0;
    double standard_error = 0.0;  // of the slope difference

    [[nodiscard]] double gap() const { return right_slope - left_slope; }
};

struct KinkReport {
    std::vector<Kink> kinks;
    std::vector<double> expected;  // k·period, k = 1..K, inside the curve
    std::vector<std::pair<std::size_t, std::int64_t>> matched;  // (kink index, k)
    std::vector<std::size_t> unmatched;                         // kinks away from every expected location
    std::vector<std::int64_t> missing;                          // expected k without a kink

    [[nodiscard]] bool exact_match() const { return unmatched.empty() && missing.empty(); }
};

// Slope discontinuities of a sampled curve, in two stages.
//
// Screening: at each grid point the jump between the neighbouring chord
// slopes is about f''·h on smooth stretches but about the slope gap next to
// a kink. A point is a candidate when its jump is the largest within
// ±window and exceeds outlier_factor times the median jump there.
//
// Confirmation: local quadratic fits on [c − window, c − exclusion] and
// [c + exclusion, c + window] give one-sided derivatives at c; the kink is
// kept when their difference exceeds `significance` times its standard error
// (and the roundoff floor). The reported location is where the two local
// models intersect when that lies within one grid step of c.
//
// Throws AnalysisError when the grid is unsorted, mismatched in size, or has
// fewer than min_points_per_period samples per period.
[[nodiscard]] KinkReport detect_kinks(std::span<const double> t, std::span<const double> y, double period,
                                      std::int64_t expected_count, const KinkOptions& options = {});

// Least-squares slope and intercept with standard error of the slope.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_error = 0.0;
    double residual_rms = 0.0;
};
[[nodiscard]] LineFit fit_line(std::span<const double> x, std::span<const double> y);

enum class RateMode {
    LinearTransfer,  // slope of P(t)
    LogSurvival,     // slope of −log P_i(t)
};

struct RateFit {
    double rate = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double residual_rms = 0.0;
    double reference = 0.0;
    std::size_t points = 0;

    [[nodiscard]] double relative_error() const;
};

// Fits inside [t_lo, t_hi] ⊂ (0, t_H], skipping the first 5% of the window.
// Throws AnalysisError when the window leaves that range or holds fewer than
// 20 points, or when log mode meets a non-positive survival probability.
[[nodiscard]] RateFit fit_rate(std::span<const double> t, std::span<const double> y, RateMode mode, double t_lo,
                               double t_hi, double t_h, double reference);

struct BreakdownCell {
    std::int64_t interval = 0;
    double max_relative_deviation = 0.0;  // max |P − γt| / γt
    double max_absolute_deviation = 0.0;  // max |P − γt|
    double max_ratio = 0.0;               // max P / γt
    double t_at_max = 0.0;                // where the relative deviation peaks
};

struct BreakdownRow {
    double alpha = 0.0;
    std::vector<BreakdownCell> cells;
};

// First-order P(t) against the golden-rule line γt, interval by interval,
// for each model. Intervals are (k t_H, (k+1) t_H]; t = 0 is skipped. With
// γ = 0 both curves vanish and every deviation is 0.
[[nodiscard]] std::vector<BreakdownRow> breakdown_scan(std::span<const ModelParams> models, double t_max_over_th,
                                                       std::int64_t points_per_interval = 200);

struct OrderScaling {
    double t = 0.0;
    std::vector<double> couplings;
    std::vector<double> residuals;  // |(1 − P_i,exact) − P_first-order|
    double exponent = 0.0;          // fitted p in residual ∝ g^p (NaN with < 2 usable points)
    double fit_rms = 0.0;
};

// Residual between the exact transfer and first-order theory at time t for
// each coupling; the exponent comes from a log-log line fit over the
// non-zero residuals.
[[nodiscard]] OrderScaling order_scaling(const ModelParams& params, double t, std::span<const double> couplings);

}  // namespace quasidecay

#endif  // QUASIDECAY_ANALYSIS_HPP
