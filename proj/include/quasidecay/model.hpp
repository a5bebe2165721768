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

#ifndef QUASIDECAY_MODEL_HPP
#define QUASIDECAY_MODEL_HPP

#include <cstdint>
#include <numbers>

namespace quasidecay {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Physical inputs of the ideal model (a discrete level E_b coupled with equal
// strength g to levels nΔ, n ∈ ℤ) together with the quantities every other
// module derives from them. Natural units: ħ = 1.
//
// Construct through derive_params(); the fields are then never mutated.
struct ModelParams {
    double e_b = 0.0;    // energy of the discrete level
    double delta = 1.0;  // level spacing of the quasi-continuum, > 0
    double g = 0.0;      // real coupling, >= 0

    double alpha = 0.0;   // fractional offset of E_b inside a spacing, [0, 1)
    double theta = 0.0;   // 2πα
    double gamma = 0.0;   // golden-rule decay rate 2πg²/Δ
    double t_h = kTwoPi;  // Heisenberg time 2π/Δ
};

// Throws ParameterError on non-finite inputs, Δ <= 0 or g < 0.
[[nodiscard]] ModelParams derive_params(double e_b, double delta, double g);

// Copy of `params` with the discrete level moved to E_b = αΔ. Used for α sweeps.
[[nodiscard]] ModelParams with_alpha(const ModelParams& params, double alpha);

// Same model with a different coupling.
[[nodiscard]] ModelParams with_coupling(const ModelParams& params, double g);

// α = x − floor(x), snapped to 0 when rounding leaves it within 1e-12 of 1.
[[nodiscard]] double offset_fraction(double x);

// Dimensionless time T = Δt/2. `interval` is the index m with
// mπ < T <= (m+1)π; T = 0 belongs to interval 0. Exact multiples of π
// therefore sit at the right end of the interval to their left.
struct DimensionlessTime {
    double value = 0.0;
    std::int64_t interval = 0;
};

// Interval index for a dimensionless time (period π) or, equivalently, for
// t / t_H with period 1. Values within 1e-12 (relative) of a boundary are
// treated as lying exactly on it.
[[nodiscard]] std::int64_t interval_index(double time, double period);

// Throws DomainError for t < 0 or non-finite t.
[[nodiscard]] DimensionlessTime to_dimensionless(double t, const ModelParams& params);

[[nodiscard]] inline double to_physical_time(double big_t, const ModelParams& params) {
    return 2.0 * big_t / params.delta;
}

}  // namespace quasidecay

#endif  // QUASIDECAY_MODEL_HPP
