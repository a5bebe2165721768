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

#include "quasidecay/model.hpp"

#include <cmath>
#include <string>

#include "quasidecay/errors.hpp"

namespace quasidecay {

namespace {

constexpr double kAlphaSnap = 1e-12;
constexpr double kBoundarySnap = 1e-12;

}  // namespace

double offset_fraction(double x) {
    double a = x - std::floor(x);
    if (std::abs(a - 1.0) < kAlphaSnap || a >= 1.0) a = 0.0;
    return a;
}

ModelParams derive_params(double e_b, double delta, double g) {
    if (!std::isfinite(e_b) || !std::isfinite(delta) || !std::isfinite(g))
        throw ParameterError("model parameters must be finite");
    if (!(delta > 0.0))
        throw ParameterError("level spacing must be positive, got " + std::to_string(delta));
    if (g < 0.0)
        throw ParameterError("coupling must be non-negative, got " + std::to_string(g));

    ModelParams p;
    p.e_b = e_b;
    p.delta = delta;
    p.g = g;
    p.alpha = offset_fraction(e_b / delta);
    p.theta = kTwoPi * p.alpha;
    p.gamma = kTwoPi * g * g / delta;
    p.t_h = kTwoPi / delta;
    return p;
}

ModelParams with_alpha(const ModelParams& params, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw DomainError("offset alpha must lie in [0, 1)");
    return derive_params(alpha * params.delta, params.delta, params.g);
}

ModelParams with_coupling(const ModelParams& params, double g) {
    return derive_params(params.e_b, params.delta, g);
}

std::int64_t interval_index(double time, double period) {
    if (!(time > 0.0)) return 0;
    const double x = time / period;
    const double nearest = std::round(x);
    if (nearest >= 1.0 && std::abs(x - nearest) <= kBoundarySnap * nearest)
        return static_cast<std::int64_t>(nearest) - 1;
    return static_cast<std::int64_t>(std::ceil(x)) - 1;
}

DimensionlessTime to_dimensionless(double t, const ModelParams& params) {
    if (!std::isfinite(t) || t < 0.0)
        throw DomainError("time must be finite and non-negative");
    DimensionlessTime out;
    out.value = params.delta * t / 2.0;
    out.interval = interval_index(out.value, kPi);
    return out;
}

}  // namespace quasidecay
