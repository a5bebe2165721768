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

#include "quasidecay/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "numeric_util.hpp"
#include "quasidecay/errors.hpp"

namespace quasidecay {

namespace {

// Below this |sin(θ/2)| the Dirichlet forms switch to their Taylor limits.
constexpr double kSmallHalfTheta = 1e-8;

// Number of forced cuts on each side of E_b in the continuum integral.
constexpr int kForcedLumps = 5;
// Tail chunks span this many lumps; at most kMaxChunks per side.
constexpr double kLumpsPerChunk = 4.0;
constexpr std::size_t kMaxChunks = 20000;

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw DomainError("offset alpha must lie in [0, 1)");
}

// W_α = W_{1−α}; folding keeps θ in [0, π] and makes the symmetry exact.
double folded_alpha(double alpha) { return alpha <= 0.5 ? alpha : 1.0 - alpha; }

}  // namespace

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

void SpectrumSpec::validate() const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i].energy) || !std::isfinite(levels[i].coupling))
            throw DomainError("spectrum levels must be finite");
        if (i > 0 && !(levels[i].energy > levels[i - 1].energy))
            throw DomainError("spectrum energies must be strictly increasing");
    }
    if (!(band_lower < band_upper))
        throw DomainError("band edges must satisfy lower < upper");
}

SpectrumSpec ideal_spectrum(const ModelParams& params, std::int64_t half_width) {
    if (half_width < 0) throw DomainError("half_width must be non-negative");
    SpectrumSpec spec;
    spec.levels.reserve(static_cast<std::size_t>(2 * half_width + 1));
    for (std::int64_t n = -half_width; n <= half_width; ++n)
        spec.levels.push_back({static_cast<double>(n) * params.delta, params.g});
    const double rho = 1.0 / params.delta;
    spec.density = [rho](double) { return rho; };
    return spec;
}

double p_first_order_generic(const SpectrumSpec& spec, double e_b, double t) {
    if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and non-negative");
    spec.validate();
    detail::CompensatedSum acc;
    for (const Level& level : spec.levels) {
        const double s = sinc((level.energy - e_b) * t / 2.0);
        acc.add(level.coupling * level.coupling * t * t * s * s);
    }
    return acc.value();
}

QuadratureResult p_first_order_integral(const std::function<double(double)>& density,
                                        const std::function<double(double)>& coupling,
                                        double a, double b, double e_b, double t, double rel_tol) {
    if (!density || !coupling) throw DomainError("density and coupling functions are required");
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < e_b && e_b < b))
        throw DomainError("the integral form needs a finite band with a < E_b < b");
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive");

    const double half_t = t / 2.0;
    auto integrand = [&](double e) {
        const double c = coupling(e);
        const double s = sinc((e - e_b) * half_t);
        return 4.0 * density(e) * c * c * half_t * half_t * s * s;
    };

    const double lump = kTwoPi / t;
    std::vector<double> cuts{a, e_b, b};
    for (int k = 1; k <= kForcedLumps; ++k) {
        cuts.push_back(e_b - k * lump);
        cuts.push_back(e_b + k * lump);
    }
    // Tails beyond the forced cuts: chunks of a few lumps each.
    const double left_start = e_b - kForcedLumps * lump;
    const double right_start = e_b + kForcedLumps * lump;
    const double chunk = kLumpsPerChunk * lump;
    if (left_start > a) {
        const auto n = std::min<std::size_t>(kMaxChunks, static_cast<std::size_t>((left_start - a) / chunk));
        const double width = (left_start - a) / static_cast<double>(n + 1);
        for (std::size_t i = 1; i <= n; ++i) cuts.push_back(left_start - static_cast<double>(i) * width);
    }
    if (right_start < b) {
        const auto n = std::min<std::size_t>(kMaxChunks, static_cast<std::size_t>((b - right_start) / chunk));
        const double width = (b - right_start) / static_cast<double>(n + 1);
        for (std::size_t i = 1; i <= n; ++i) cuts.push_back(right_start + static_cast<double>(i) * width);
    }
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c < a || c > b; }), cuts.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
    detail::CompensatedSum value;
    double error = 0.0;
    QuadratureResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double segment_error = 0.0;
        value.add(Quadrature::integrate(integrand, cuts[i], cuts[i + 1], 15, rel_tol * 0.1, &segment_error));
        error += segment_error;
        ++out.segments;
    }
    out.value = value.value();
    out.error_estimate = error;
    if (!(error <= rel_tol * std::abs(out.value)) && out.value != 0.0) {
        std::ostringstream msg;
        msg << "continuum quadrature did not converge: estimate " << out.value << ", error " << error
            << " over " << out.segments << " segments (requested relative tolerance " << rel_tol << ")";
        throw NumericalError(msg.str());
    }
    return out;
}

double dirichlet_kernel(std::int64_t m, double theta) {
    const double a = theta / kTwoPi;
    const double n = static_cast<double>(2 * m + 1);
    const double s = detail::sin_pi(a);
    if (std::abs(s) < kSmallHalfTheta) return n * (1.0 - (n * n - 1.0) * theta * theta / 24.0);
    return detail::sin_pi(n * a) / s;
}

double w_alpha_slope(std::int64_t m, double alpha) {
    check_alpha(alpha);
    return kPi * dirichlet_kernel(m, kTwoPi * folded_alpha(alpha));
}

double w_alpha_at_multiple(std::int64_t m, double alpha) {
    check_alpha(alpha);
    if (m == 0) return 0.0;
    const double a = folded_alpha(alpha);
    const double s = detail::sin_pi(a);
    const double md = static_cast<double>(m);
    if (std::abs(s) < kSmallHalfTheta) {
        const double theta = kTwoPi * a;
        return kPi * kPi * md * md * (1.0 - (md * md - 1.0) * theta * theta / 12.0);
    }
    const double r = detail::sin_pi(md * a) / s;
    return kPi * kPi * r * r;
}

double w_alpha(double big_t, double alpha) {
    check_alpha(alpha);
    if (!std::isfinite(big_t) || big_t < 0.0)
        throw DomainError("dimensionless time must be finite and non-negative");
    if (big_t == 0.0) return 0.0;
    const std::int64_t m = interval_index(big_t, kPi);
    return w_alpha_slope(m, alpha) * (big_t - static_cast<double>(m) * kPi) + w_alpha_at_multiple(m, alpha);
}

DirectSum w_alpha_direct(double big_t, double alpha, std::int64_t truncation) {
    check_alpha(alpha);
    if (truncation < 1) throw DomainError("truncation order must be at least 1");
    if (!std::isfinite(big_t) || big_t < 0.0)
        throw DomainError("dimensionless time must be finite and non-negative");
    DirectSum out;
    if (big_t == 0.0) return out;
    detail::CompensatedSum acc;
    for (std::int64_t m = -truncation; m <= truncation; ++m) {
        const double s = sinc((static_cast<double>(m) - alpha) * big_t);
        acc.add(s * s);
    }
    out.value = big_t * big_t * acc.value();
    const double md = static_cast<double>(truncation);
    out.tail_bound = 2.0 / md + 1.0 / (md * md);
    return out;
}

double p_ideal_first_order(const ModelParams& params, double t) {
    const DimensionlessTime big_t = to_dimensionless(t, params);
    const double ratio = params.g / params.delta;
    return 4.0 * ratio * ratio * w_alpha(big_t.value, params.alpha);
}

double golden_rule_rate(double density_at_eb, double coupling_at_eb) {
    if (!(density_at_eb >= 0.0)) throw DomainError("density of states must be non-negative");
    return kTwoPi * coupling_at_eb * coupling_at_eb * density_at_eb;
}

ValidityWindow validity_window(const SpectrumSpec& spec, double e_b) {
    if (!(spec.band_lower < e_b && e_b < spec.band_upper))
        throw DomainError("E_b must lie strictly inside the band");
    if (!spec.density) throw DomainError("validity window needs a density of states");
    const double rho = spec.density(e_b);
    if (!(rho > 0.0)) throw DomainError("density of states at E_b must be positive");

    ValidityWindow w;
    const double nearest_edge = std::min(std::abs(spec.band_lower - e_b), std::abs(spec.band_upper - e_b));
    w.t_min = std::isinf(nearest_edge) ? 0.0 : kTwoPi / nearest_edge;
    w.t_max = kTwoPi * rho;
    w.nonempty = w.t_min < w.t_max;
    return w;
}

}  // namespace quasidecay
