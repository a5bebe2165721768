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

#include "quasidecay/exact_dyson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "numeric_util.hpp"
#include "quasidecay/errors.hpp"

namespace quasidecay {

namespace {

constexpr double kBoundarySnap = 1e-12;

// e^{ikθ} with θ = 2πα, reduced in units of π so integer multiples are exact.
Complex echo_phase(std::int64_t k, double alpha) {
    const double x = 2.0 * static_cast<double>(k) * alpha;
    return {detail::sin_pi(x + 0.5), detail::sin_pi(x)};
}

// k >= 1 when t sits on k t_H (within snapping tolerance), 0 otherwise.
std::int64_t boundary_echo(double t, double t_h) {
    const double x = t / t_h;
    const double nearest = std::round(x);
    if (nearest >= 1.0 && std::abs(x - nearest) <= kBoundarySnap * nearest)
        return static_cast<std::int64_t>(nearest);
    return 0;
}

double binomial(int n, int k) {
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    return out;
}

}  // namespace

double IntervalTerm::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double IntervalTerm::derivative(double x) const {
    double acc = 0.0;
    for (std::size_t r = coefficients.size(); r-- > 1;)
        acc = acc * x + static_cast<double>(r) * coefficients[r];
    return acc;
}

std::vector<IntervalTerm> interval_terms(int k_max) {
    if (k_max < 0) throw DomainError("k_max must be non-negative");
    std::vector<IntervalTerm> terms;
    terms.reserve(static_cast<std::size_t>(k_max) + 1);
    terms.push_back({0, {1.0}});
    for (int k = 1; k <= k_max; ++k) {
        IntervalTerm term{k, std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0)};
        double factorial = 1.0;
        for (int r = 1; r <= k; ++r) {
            factorial *= r;
            const double sign = (r % 2 == 0) ? 1.0 : -1.0;
            term.coefficients[static_cast<std::size_t>(r)] = sign * binomial(k - 1, r - 1) / factorial;
        }
        terms.push_back(std::move(term));
    }
    return terms;
}

double generalized_laguerre(int n, double a, double x) {
    if (n < 0) throw DomainError("Laguerre degree must be non-negative");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + a - x;
    for (int j = 1; j < n; ++j) {
        const double next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double echo_polynomial_laguerre(int k, double x) {
    if (k == 0) return 1.0;
    return -(x / k) * generalized_laguerre(k - 1, 1.0, x);
}

SurvivalAmplitude::SurvivalAmplitude(const ModelParams& params, int k_max)
    : params_(params), k_max_(k_max) {
    if (k_max < 0 || k_max > kMaxSupportedEcho)
        throw DomainError("echo limit must lie in [0, " + std::to_string(kMaxSupportedEcho) + "]");
    terms_ = interval_terms(k_max);
}

Complex SurvivalAmplitude::sum(double t, std::int64_t last_echo, Complex* rate) const {
    Complex amp{0.0, 0.0};
    Complex d{0.0, 0.0};
    const double gamma = params_.gamma;
    for (std::int64_t k = 0; k <= last_echo; ++k) {
        const double delay = std::max(0.0, t - static_cast<double>(k) * params_.t_h);
        const double x = gamma * delay;
        const double decay = std::exp(-x / 2.0);
        const IntervalTerm& c = terms_[static_cast<std::size_t>(k)];
        const Complex phase = echo_phase(k, params_.alpha);
        const double value = c(x);
        amp += phase * (value * decay);
        d += phase * (gamma * (c.derivative(x) - value / 2.0) * decay);
    }
    if (rate) *rate = d;
    return amp;
}

Complex SurvivalAmplitude::operator()(double t) const {
    if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and non-negative");
    const std::int64_t interval = interval_index(t, params_.t_h);
    if (interval > k_max_)
        throw DomainError("time " + std::to_string(t) + " lies beyond the closed-form range (" +
                          std::to_string(k_max_ + 1) + " Heisenberg times); use the numeric propagator");
    if (t == 0.0) return {1.0, 0.0};
    return sum(t, interval, nullptr);
}

SurvivalAmplitude::OneSided SurvivalAmplitude::one_sided(double t) const {
    const Complex value = (*this)(t);
    OneSided out;
    const std::int64_t interval = interval_index(t, params_.t_h);
    out.left = value;
    sum(t, interval, &out.rate_left);
    out.right = out.left;
    out.rate_right = out.rate_left;
    if (const std::int64_t k = boundary_echo(t, params_.t_h); k > 0) {
        // c_k(0) = 0 and c_k'(0) = −1 for every k >= 1.
        out.rate_right = out.rate_left - params_.gamma * echo_phase(k, params_.alpha);
    }
    return out;
}

Complex survival_amplitude(const ModelParams& params, double t) { return SurvivalAmplitude(params)(t); }

AmplitudeSeries survival_probability_series(const ModelParams& params, std::span<const double> grid,
                                            int k_max) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) throw DomainError("time grid must be non-negative");
        if (i > 0 && grid[i] < grid[i - 1]) throw DomainError("time grid must be sorted");
    }
    const SurvivalAmplitude amplitude(params, k_max);
    auto probability_rate = [](Complex s, Complex ds) { return 2.0 * std::real(std::conj(s) * ds); };

    AmplitudeSeries out;
    out.times.assign(grid.begin(), grid.end());
    out.amplitudes.reserve(grid.size());
    out.survival.reserve(grid.size());
    out.survival_rate.reserve(grid.size());
    out.interval_ids.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const auto sides = amplitude.one_sided(t);
        out.amplitudes.push_back(sides.left);
        out.survival.push_back(std::norm(sides.left));
        out.survival_rate.push_back(probability_rate(sides.left, sides.rate_left));
        out.interval_ids.push_back(interval_index(t, params.t_h));
        if (const std::int64_t k = boundary_echo(t, params.t_h); k > 0) {
            out.boundaries.push_back({i, k, sides.left, sides.right, probability_rate(sides.left, sides.rate_left),
                                      probability_rate(sides.right, sides.rate_right)});
        }
    }
    return out;
}

}  // namespace quasidecay
