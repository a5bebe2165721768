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

#ifndef QUASIDECAY_EXACT_DYSON_HPP
#define QUASIDECAY_EXACT_DYSON_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "quasidecay/model.hpp"

namespace quasidecay {

using Complex = std::complex<double>;

// Highest echo index evaluated in closed form unless the caller asks for more.
inline constexpr int kDefaultMaxEcho = 8;
inline constexpr int kMaxSupportedEcho = 64;

// Polynomial c_k(x) multiplying e^{ikθ} e^{−x/2}, x = γ(t − k t_H), in the
// survival amplitude. coefficients[r] is the coefficient of x^r.
//
// The Dyson series restricted to (k t_H, (k+1) t_H) collects, for every echo
// k, the ways of splitting k into r >= 1 positive delay multiples among the
// n return trips; summing over n gives
//   c_k(x) = Σ_{r=1}^{k} C(k−1, r−1) (−x)^r / r!,     c_0 = 1.
struct IntervalTerm {
    int k = 0;
    std::vector<double> coefficients;

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double derivative(double x) const;
};

// Coefficient tables c_0..c_{k_max} from the composition count above.
[[nodiscard]] std::vector<IntervalTerm> interval_terms(int k_max);

// Generalized Laguerre L_n^{(a)}(x) by the three-term recurrence.
[[nodiscard]] double generalized_laguerre(int n, double a, double x);

// Second route to c_k: −(x/k) L_{k−1}^{(1)}(x), c_0 = 1.
[[nodiscard]] double echo_polynomial_laguerre(int k, double x);

// S_bb(t) = Σ_{k=0}^{K} e^{ikθ} c_k(γ(t − k t_H)) e^{−γ(t − k t_H)/2}, with
// K the interval index of t (exact multiples of t_H use the left interval).
// The interaction-picture amplitude: the free phase e^{−iE_b t} is removed.
class SurvivalAmplitude {
public:
    explicit SurvivalAmplitude(const ModelParams& params, int k_max = kDefaultMaxEcho);

    // Throws DomainError for t < 0 or t beyond (k_max + 1) t_H.
    [[nodiscard]] Complex operator()(double t) const;

    struct OneSided {
        Complex left;
        Complex right;
        Complex rate_left;   // dS/dt from the left
        Complex rate_right;  // dS/dt from the right
    };
    // Both one-sided limits of S and dS/dt. Away from multiples of t_H the
    // two sides coincide. At t = k t_H the right side picks up the new echo,
    // whose polynomial vanishes at x = 0 but has slope −γ e^{ikθ}.
    [[nodiscard]] OneSided one_sided(double t) const;

    [[nodiscard]] double max_time() const { return static_cast<double>(k_max_ + 1) * params_.t_h; }
    [[nodiscard]] const ModelParams& params() const { return params_; }
    [[nodiscard]] int k_max() const { return k_max_; }

private:
    Complex sum(double t, std::int64_t last_echo, Complex* rate) const;

    ModelParams params_;
    int k_max_;
    std::vector<IntervalTerm> terms_;
};

// Convenience wrapper using the default echo limit.
[[nodiscard]] Complex survival_amplitude(const ModelParams& params, double t);

struct BoundaryValue {
    std::size_t index = 0;  // grid index of the boundary point
    std::int64_t k = 0;     // t = k t_H
    Complex amplitude_left;
    Complex amplitude_right;
    double rate_left = 0.0;   // dP_i/dt from the left
    double rate_right = 0.0;  // dP_i/dt from the right
};

struct AmplitudeSeries {
    std::vector<double> times;
    std::vector<Complex> amplitudes;
    std::vector<double> survival;       // |S_bb|²
    std::vector<double> survival_rate;  // dP_i/dt, left-sided at boundaries
    std::vector<std::int64_t> interval_ids;
    std::vector<BoundaryValue> boundaries;
};

// Evaluates the grid point by point. Throws DomainError when the grid is not
// sorted, has negative entries or reaches past the closed-form limit.
[[nodiscard]] AmplitudeSeries survival_probability_series(const ModelParams& params,
                                                          std::span<const double> grid,
                                                          int k_max = kDefaultMaxEcho);

}  // namespace quasidecay

#endif  // QUASIDECAY_EXACT_DYSON_HPP
