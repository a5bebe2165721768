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

#ifndef QUASIDECAY_SRC_NUMERIC_UTIL_HPP
#define QUASIDECAY_SRC_NUMERIC_UTIL_HPP

#include <cmath>
#include <numbers>

namespace quasidecay::detail {

// Neumaier's variant of Kahan summation. Order-dependent but deterministic.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// sin(πx) with the argument reduced first, so integers give exactly 0.
inline double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r <= -1.0) r += 2.0;
    if (r > 1.0) r -= 2.0;
    // r in (-1, 1]
    if (r > 0.5) r = 1.0 - r;
    if (r < -0.5) r = -1.0 - r;
    return std::sin(std::numbers::pi * r);
}

}  // namespace quasidecay::detail

#endif  // QUASIDECAY_SRC_NUMERIC_UTIL_HPP
