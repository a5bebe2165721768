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

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <boost/math/special_functions/laguerre.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "quasidecay/errors.hpp"
#include "quasidecay/exact_dyson.hpp"
#include "quasidecay/first_order.hpp"
#include "quasidecay/model.hpp"
#include "quasidecay/propagator.hpp"

using namespace quasidecay;
using oracle::pi;

namespace {

std::vector<double> uniform_grid(double t_end, int n) {
    std::vector<double> out;
    for (int i = 0; i <= n; ++i) out.push_back(t_end * i / n);
    return out;
}

}  // namespace

TEST_CASE("low-order echo polynomials are exact") {
    const std::vector<IntervalTerm> terms = interval_terms(2);
    REQUIRE(terms.size() == 3);
    CHECK(terms[0].coefficients == std::vector<double>{1.0});
    CHECK(terms[1].coefficients == std::vector<double>{0.0, -1.0});
    CHECK(terms[2].coefficients == std::vector<double>{0.0, -1.0, 0.5});
    CHECK(interval_terms(0).size() == 1);
    CHECK_THROWS_AS((void)interval_terms(-1), DomainError);
    for (double x : {0.0, 0.3, 2.0, 7.5}) {
        CHECK(terms[1](x) == -x);
        CHECK(terms[2](x) == doctest::Approx(x * x / 2.0 - x).epsilon(1e-15));
        CHECK(terms[2].derivative(x) == doctest::Approx(x - 1.0).epsilon(1e-15));
    }
}

TEST_CASE("coefficients match the composition count") {
    const std::vector<IntervalTerm> terms = interval_terms(16);
    for (int k = 0; k <= 16; ++k) {
        const std::vector<double> ref = oracle::echo_coefficients_by_enumeration(k);
        REQUIRE(terms[static_cast<std::size_t>(k)].coefficients.size() == ref.size());
        for (std::size_t r = 0; r < ref.size(); ++r)
            CHECK(std::abs(terms[static_cast<std::size_t>(k)].coefficients[r] - ref[r]) <= 1e-14 * std::abs(ref[r]));
    }
}

TEST_CASE("Laguerre form of the echo polynomials") {
    const std::vector<IntervalTerm> terms = interval_terms(12);
    for (int k = 1; k <= 12; ++k) {
        for (double x : {0.0, 0.1, 1.0, 3.3, 8.0}) {
            const IntervalTerm& term = terms[static_cast<std::size_t>(k)];
            const double direct = term(x);
            // Alternating terms: tolerance relative to the sum of magnitudes.
            double magnitude = 0.0;
            for (std::size_t r = 0; r < term.coefficients.size(); ++r)
                magnitude += std::abs(term.coefficients[r]) * std::pow(x, static_cast<double>(r));
            const double tol = 1e-14 * std::max(1.0, magnitude);
            CHECK(std::abs(echo_polynomial_laguerre(k, x) - direct) <= tol);
            const double boost_form = -(x / k) * boost::math::laguerre(static_cast<unsigned>(k - 1), 1u, x);
            CHECK(std::abs(direct - boost_form) <= tol);
        }
    }
    CHECK(echo_polynomial_laguerre(0, 2.0) == 1.0);
}

TEST_CASE("generalized Laguerre polynomials") {
    for (double a : {0.0, 1.0, 2.5}) {
        for (double x : {0.0, 0.4, 3.0}) {
            CHECK(generalized_laguerre(0, a, x) == 1.0);
            CHECK(generalized_laguerre(1, a, x) == doctest::Approx(1.0 + a - x));
            CHECK(generalized_laguerre(2, a, x) ==
                  doctest::Approx((x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0)) / 2.0));
        }
    }
    for (unsigned n = 0; n <= 15; ++n)
        for (double x : {0.2, 1.7, 6.0})
            CHECK(generalized_laguerre(static_cast<int>(n), 1.0, x) ==
                  doctest::Approx(boost::math::laguerre(n, 1u, x)).epsilon(1e-12).scale(1.0));
    CHECK_THROWS_AS((void)generalized_laguerre(-1, 1.0, 1.0), DomainError);
}

TEST_CASE("survival amplitude examples") {
    const ModelParams p = derive_params(0.5, 1.0, 0.15);
    const SurvivalAmplitude s(p);
    CHECK(s(0.0) == Complex(1.0, 0.0));
    for (double f : {0.1, 0.5, 0.99}) {
        for (double a : {0.0, 0.25, 3.0 / 7.0, 0.5, 0.9}) {
            const Complex v = SurvivalAmplitude(with_alpha(p, a))(f * p.t_h);
            CHECK(std::abs(v - std::exp(-p.gamma * f * p.t_h / 2.0)) <= 1e-14);
        }
    }
    const double gt = p.gamma * p.t_h;
    const Complex v = s(1.5 * p.t_h);
    CHECK(v.real() == doctest::Approx(std::exp(-0.75 * gt) + 0.5 * gt * std::exp(-0.25 * gt)).epsilon(1e-14));
    CHECK(std::abs(v.imag()) <= 1e-15);
    CHECK(survival_amplitude(p, 1.5 * p.t_h) == v);

    CHECK_THROWS_AS((void)s(-0.1), DomainError);
    CHECK_THROWS_AS((void)s(9.5 * p.t_h), DomainError);
    CHECK_NOTHROW((void)s(9.0 * p.t_h));
    CHECK_NOTHROW((void)SurvivalAmplitude(p, 12)(12.5 * p.t_h));
    CHECK_THROWS_AS((void)SurvivalAmplitude(p, 65), DomainError);
    CHECK_THROWS_AS((void)SurvivalAmplitude(p, -1), DomainError);
}

TEST_CASE("closed form agrees with the delay-equation oracle") {
    for (double g : {0.05, 0.15, 0.3}) {
        for (double a : {0.0, 0.25, 0.3, 3.0 / 7.0, 0.5}) {
            const ModelParams p = derive_params(a, 1.0, g);
            const oracle::DelayOracle ode(p.gamma, p.theta, p.t_h, 9.0 * p.t_h, 2000);
            const SurvivalAmplitude s(p);
            double worst = 0.0;
            for (int i = 0; i <= 900; ++i) {
                const double t = 9.0 * p.t_h * i / 900.0;
                worst = std::max(worst, std::abs(s(t) - ode(t)));
            }
            INFO("g = " << g << ", alpha = " << a);
            CHECK(worst <= 1e-8);
        }
    }
}

TEST_CASE("higher echo limits stay accurate") {
    const ModelParams p = derive_params(0.3, 1.0, 0.1);
    const oracle::DelayOracle ode(p.gamma, p.theta, p.t_h, 20.0 * p.t_h, 1000);
    const SurvivalAmplitude s(p, 20);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double t = 20.0 * p.t_h * i / 2000.0;
        worst = std::max(worst, std::abs(s(t) - ode(t)));
    }
    CHECK(worst <= 1e-7);
}

TEST_CASE("survival series examples and invariants") {
    const ModelParams p = derive_params(0.3, 1.0, 0.15);
    const std::vector<double> grid = uniform_grid(4.0 * p.t_h, 800);
    const AmplitudeSeries series = survival_probability_series(p, grid);
    REQUIRE(series.survival.size() == grid.size());
    CHECK(series.survival[0] == 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(series.survival[i] >= 0.0);
        CHECK(series.survival[i] <= 1.0);
        CHECK(series.interval_ids[i] == interval_index(grid[i], p.t_h));
        if (grid[i] < p.t_h) {
            CHECK(std::abs(series.survival[i] - std::exp(-p.gamma * grid[i])) <= 1e-12);
            if (i > 0) CHECK(series.survival[i] < series.survival[i - 1]);
        }
    }
    REQUIRE(series.boundaries.size() == 4);
    for (std::size_t b = 0; b < 4; ++b) {
        const BoundaryValue& v = series.boundaries[b];
        CHECK(v.k == static_cast<std::int64_t>(b) + 1);
        CHECK(v.index == 200 * (b + 1));
        CHECK(std::abs(v.amplitude_left - v.amplitude_right) <= 1e-10);
        CHECK(series.amplitudes[v.index] == v.amplitude_left);
    }

    const AmplitudeSeries zero = survival_probability_series(derive_params(0.3, 1.0, 0.0), grid);
    for (double v : zero.survival) CHECK(v == 1.0);

    const double t = 1.5 * p.t_h;
    const std::vector<double> one{t};
    const double p0 = survival_probability_series(with_alpha(p, 0.0), one).survival[0];
    const double p5 = survival_probability_series(with_alpha(p, 0.5), one).survival[0];
    CHECK(std::abs(p0 - p5) > 1e-3);

    const std::vector<double> unsorted{0.0, 2.0, 1.0};
    CHECK_THROWS_AS((void)survival_probability_series(p, unsorted), DomainError);
    const std::vector<double> negative{-1.0, 0.0};
    CHECK_THROWS_AS((void)survival_probability_series(p, negative), DomainError);
}

TEST_CASE("probability stays in [0, 1] across parameters") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ua(0.0, 1.0), ug(0.0, 0.4);
    for (int trial = 0; trial < 50; ++trial) {
        const ModelParams p = derive_params(ua(rng), 1.0, ug(rng));
        const AmplitudeSeries s = survival_probability_series(p, uniform_grid(9.0 * p.t_h, 900));
        for (double v : s.survival) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("amplitude is continuous across boundaries") {
    for (double g : {0.05, 0.15}) {
        for (double a : {0.0, 0.1, 0.25, 3.0 / 7.0, 0.5, 0.8}) {
            const ModelParams p = derive_params(a, 1.0, g);
            const SurvivalAmplitude s(p);
            for (int k = 1; k <= 5; ++k) {
                const auto sides = s.one_sided(k * p.t_h);
                CHECK(std::abs(sides.left - sides.right) <= 1e-10);
                // Jump of dS/dt is −γ e^{ikθ}.
                const Complex jump = sides.rate_right - sides.rate_left;
                CHECK(std::abs(jump + p.gamma * std::polar(1.0, k * p.theta)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("finite differences see the cusps") {
    for (double a : {0.1, 0.3, 3.0 / 7.0, 0.5}) {
        const ModelParams p = derive_params(a, 1.0, 0.15);
        const SurvivalAmplitude s(p);
        const double h = 1e-6 * p.t_h;
        auto prob = [&](double t) { return std::norm(s(t)); };
        std::vector<double> grid;
        for (int k = 1; k <= 5; ++k) grid.push_back(k * p.t_h);
        const AmplitudeSeries series = survival_probability_series(p, grid);
        for (int k = 1; k <= 5; ++k) {
            const double t = k * p.t_h;
            const double left = (prob(t) - prob(t - h)) / h;
            const double right = (prob(t + h) - prob(t)) / h;
            // Discretization error is O(h P''), far below the jump.
            const double fd_error = 10.0 * h * p.gamma * p.gamma;
            const BoundaryValue& b = series.boundaries[static_cast<std::size_t>(k - 1)];
            CHECK(std::abs(left - b.rate_left) <= fd_error + 1e-8);
            CHECK(std::abs(right - b.rate_right) <= fd_error + 1e-8);
            const double analytic = -2.0 * p.gamma * std::real(std::conj(s(t)) * std::polar(1.0, k * p.theta));
            CHECK(b.rate_right - b.rate_left == doctest::Approx(analytic).epsilon(1e-10).scale(1e-12));
            if (std::abs(analytic) > 1e-3) CHECK(std::abs(right - left) > 100.0 * (fd_error + 1e-8));
        }
    }
}

TEST_CASE("quarter offset has no survival cusp at the first boundary") {
    // S(t_H) is real and e^{iθ} = i, so the derivative jump of |S|² vanishes.
    const ModelParams p = derive_params(0.25, 1.0, 0.15);
    const std::vector<double> grid{p.t_h, 2.0 * p.t_h};
    const AmplitudeSeries series = survival_probability_series(p, grid);
    CHECK(std::abs(series.boundaries[0].rate_right - series.boundaries[0].rate_left) <= 1e-15);
    CHECK(std::abs(series.boundaries[1].rate_right - series.boundaries[1].rate_left) > 1e-3);
}

TEST_CASE("first interval is alpha independent") {
    const ModelParams p = derive_params(0.0, 1.0, 0.15);
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(p.t_h * i / 200.0);
    double worst = 0.0;
    for (int j = 0; j < 20; ++j) {
        const AmplitudeSeries s = survival_probability_series(with_alpha(p, j / 20.0), grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, std::abs(s.survival[i] - std::exp(-p.gamma * grid[i])));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("perturbative consistency inside the first interval") {
    const ModelParams p = derive_params(0.3, 1.0, 0.1);
    for (double f : {0.1, 0.5, 0.9}) {
        const double t = f * p.t_h;
        const double transfer = 1.0 - std::norm(SurvivalAmplitude(p)(t));
        const double gt = p.gamma * t;
        CHECK(std::abs(transfer - gt) <= 0.5 * gt * gt);
    }
    const double t = 0.5 * p.t_h;
    auto residual = [&](double g) {
        const ModelParams q = with_coupling(p, g);
        return std::abs((1.0 - std::norm(SurvivalAmplitude(q)(t))) - p_ideal_first_order(q, t));
    };
    for (double g : {0.04, 0.02}) {
        const double factor = residual(g) / residual(g / 2.0);
        CHECK(factor >= 12.0);
        CHECK(factor <= 20.0);
    }
}

TEST_CASE("higher echoes against the numeric propagator") {
    // The truncated band shifts the numeric amplitude by O(g²/N); two
    // widths give the rate and a Richardson estimate of the N → ∞ limit.
    const ModelParams p = derive_params(0.3, 1.0, 0.15);
    std::vector<double> grid;
    for (int i = 1; i < 200; ++i) grid.push_back(p.t_h * (3.0 + 2.0 * i / 200.0));
    const PropagationResult n1 = propagate(PropagatorState::build(p, 1000), grid);
    const PropagationResult n2 = propagate(PropagatorState::build(p, 2000), grid);
    const SurvivalAmplitude s(p, 4);
    double raw1 = 0.0, raw2 = 0.0, extrapolated = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex exact = s(grid[i]);
        raw1 = std::max(raw1, std::abs(exact - n1.amplitude[i]));
        raw2 = std::max(raw2, std::abs(exact - n2.amplitude[i]));
        extrapolated = std::max(extrapolated, std::abs(exact - (2.0 * n2.amplitude[i] - n1.amplitude[i])));
    }
    MESSAGE("N=1000: " << raw1 << ", N=2000: " << raw2 << ", extrapolated: " << extrapolated);
    CHECK(raw1 <= 1e-3);
    CHECK(raw1 / raw2 == doctest::Approx(2.0).epsilon(0.1));
    CHECK(extrapolated <= 1e-6);
}
