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

#ifndef QUASIDECAY_FIRST_ORDER_HPP
#define QUASIDECAY_FIRST_ORDER_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "quasidecay/model.hpp"

namespace quasidecay {

// sin(x)/x with the removable singularity at 0 filled in.
[[nodiscard]] double sinc(double x);

struct Level {
    double energy = 0.0;
    double coupling = 0.0;
};

// A quasi-continuum: a finite, strictly increasing list of levels with their
// couplings to the discrete level, an optional band [lower, upper] (infinite
// edges mean "no edge") and an optional density of states for the
// continuum-integral form.
struct SpectrumSpec {
    std::vector<Level> levels;
    double band_lower = -std::numeric_limits<double>::infinity();
    double band_upper = std::numeric_limits<double>::infinity();
    std::function<double(double)> density;

    // Throws DomainError when energies are not strictly increasing or a value
    // is non-finite, or when the band edges are inverted.
    void validate() const;
};

// Levels nΔ for |n| <= half_width, each coupled with g. The band is the whole
// real line and the density is 1/Δ, i.e. the untruncated model.
[[nodiscard]] SpectrumSpec ideal_spectrum(const ModelParams& params, std::int64_t half_width);

// Σ_n g_n² · 4 sin²((E_n − E_b)t/2)/(E_n − E_b)², resonant terms by their
// limit g_n² t². Summed in level order with compensation.
[[nodiscard]] double p_first_order_generic(const SpectrumSpec& spec, double e_b, double t);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t segments = 0;
};

// Continuum approximation of the first-order sum:
//   4 ∫_a^b ρ(ε) g(ε)² sin²((ε − E_b)t/2)/(ε − E_b)² dε
// by adaptive Gauss-Kronrod. The interval is cut at E_b and at E_b ± 2πk/t
// (k = 1..5) so the central lumps are resolved, and the tails are chunked a
// few lumps at a time. Throws NumericalError when the combined error
// estimate exceeds rel_tol·|value|.
[[nodiscard]] QuadratureResult p_first_order_integral(const std::function<double(double)>& density,
                                                      const std::function<double(double)>& coupling,
                                                      double a, double b, double e_b, double t,
                                                      double rel_tol = 1e-8);

// Dirichlet kernel sin((2m+1)θ/2)/sin(θ/2) = Σ_{|n|<=m} e^{inθ}, with the
// θ → 0 limit 2m+1.
[[nodiscard]] double dirichlet_kernel(std::int64_t m, double theta);

// Closed-form W_α(T): on mπ < T <= (m+1)π it is the straight line
//   π D_m(θ) (T − mπ) + π² sin²(mθ/2)/sin²(θ/2),   θ = 2πα.
// Throws DomainError for T < 0 or α outside [0, 1).
[[nodiscard]] double w_alpha(double big_t, double alpha);

// Value of W_α at T = mπ, π²(1 − cos mθ)/(1 − cos θ) (π² m² for θ = 0).
[[nodiscard]] double w_alpha_at_multiple(std::int64_t m, double alpha);

// dW/dT on interval m, i.e. π D_m(θ).
[[nodiscard]] double w_alpha_slope(std::int64_t m, double alpha);

struct DirectSum {
    double value = 0.0;
    double tail_bound = 0.0;  // bound on the discarded |m| > M terms
};

// Brute-force T² Σ_{|m|<=M} sinc²((m − α)T). Kept independent of w_alpha so
// it can serve as its oracle. The discarded tail is bounded by
// Σ_{|m|>M} 1/(m − α)² <= 1/(M − 1) + 1/M.
[[nodiscard]] DirectSum w_alpha_direct(double big_t, double alpha, std::int64_t truncation);

// (4g²/Δ²) W_α(Δt/2).
[[nodiscard]] double p_ideal_first_order(const ModelParams& params, double t);

// 2π |g|² ρ.
[[nodiscard]] double golden_rule_rate(double density_at_eb, double coupling_at_eb);

struct ValidityWindow {
    double t_min = 0.0;  // lumps narrower than the band
    double t_max = 0.0;  // spacing finer than the lump width
    bool nonempty = false;
};

// Raw bounds t_min = 2π/min(|a − E_b|, |b − E_b|) and t_max = 2πρ(E_b). No
// safety factor is applied. Throws DomainError unless a < E_b < b and
// ρ(E_b) > 0.
[[nodiscard]] ValidityWindow validity_window(const SpectrumSpec& spec, double e_b);

}  // namespace quasidecay

#endif  // QUASIDECAY_FIRST_ORDER_HPP
