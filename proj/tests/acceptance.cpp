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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "quasidecay/analysis.hpp"
#include "quasidecay/exact_dyson.hpp"
#include "quasidecay/first_order.hpp"
#include "quasidecay/model.hpp"
#include "quasidecay/propagator.hpp"

using namespace quasidecay;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string format(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

const std::vector<double> kAlphas{0.0, 0.1, 0.25, 3.0 / 7.0, 0.5};

Outcome first_interval_golden_rule() {
    double worst_closed = 0.0, worst_oracle = 0.0;
    for (double a : kAlphas) {
        for (int i = 1; i <= 2000; ++i) {
            const double big_t = kPi * i / 2000.0;
            worst_closed = std::max(worst_closed, std::abs(w_alpha(big_t, a) - kPi * big_t) / (kPi * big_t));
        }
        for (double big_t : {1e-9, 1e-6, 1e-3}) {
            worst_closed = std::max(worst_closed, std::abs(w_alpha(big_t, a) - kPi * big_t) / (kPi * big_t));
        }
        // The M = 10⁶ tail is ≈ 2/M absolute, so the oracle grid starts at π/10.
        for (int i = 1; i <= 10; ++i) {
            const double big_t = kPi * i / 10.0;
            const double direct = w_alpha_direct(big_t, a, 1000000).value;
            worst_oracle = std::max(worst_oracle, std::abs(direct - w_alpha(big_t, a)) / w_alpha(big_t, a));
        }
    }
    return {worst_closed <= 1e-12 && worst_oracle <= 1e-5,
            format("closed form max rel %.3g (<= 1e-12), direct sum max rel %.3g (<= 1e-5)", worst_closed,
                   worst_oracle)};
}

Outcome kink_structure() {
    double worst_slope = 0.0;
    for (double a : kAlphas) {
        const double theta = kTwoPi * a;
        for (int m = 0; m < 4; ++m) {
            const double t1 = (m + 0.1) * kPi, t2 = (m + 0.95) * kPi, t3 = (m + 0.5) * kPi;
            const double slope = (w_alpha(t2, a) - w_alpha(t1, a)) / (t2 - t1);
            const double ref = a == 0.0 ? kPi * (2 * m + 1)
                                        : kPi * std::sin((2 * m + 1) * theta / 2.0) / std::sin(theta / 2.0);
            // Linear: the midpoint lies on the chord.
            const double mid = w_alpha(t1, a) + slope * (t3 - t1);
            worst_slope = std::max({worst_slope, std::abs(slope - ref) / std::max(1.0, std::abs(ref)),
                                    std::abs(mid - w_alpha(t3, a)) / std::max(1.0, std::abs(mid))});
        }
    }
    std::vector<double> t, w;
    for (int j = 1; j <= 800; ++j) {
        t.push_back(kPi * j / 200.0);
        w.push_back(w_alpha(t.back(), 3.0 / 7.0));
    }
    const KinkReport r = detect_kinks(t, w, kPi, 3);
    std::string locs;
    for (const Kink& k : r.kinks) locs += format(" %.4f", k.location / kPi);
    const bool ok = worst_slope <= 1e-10 && r.exact_match() && r.kinks.size() == 3;
    return {ok, format("slope max rel error %.3g; alpha 3/7 kinks at T/pi =%s (unmatched %zu, missing %zu)",
                       worst_slope, locs.c_str(), r.unmatched.size(), r.missing.size())};
}

Outcome revival_divergence() {
    double worst_zero = 0.0, worst_ratio = 0.0;
    for (int k = 1; k <= 5; ++k) worst_zero = std::max(worst_zero, std::abs(w_alpha(2.0 * k * kPi, 0.5)));
    for (int m = 1; m <= 5; ++m)
        worst_ratio = std::max(worst_ratio, std::abs(w_alpha(m * kPi, 0.0) / (kPi * kPi * m * m) - 1.0));
    return {worst_zero <= 1e-10 && worst_ratio <= 1e-8,
            format("max |W_0.5(2k pi)| %.3g (<= 1e-10), max |W_0(m pi)/(pi m)^2 - 1| %.3g (<= 1e-8)", worst_zero,
                   worst_ratio)};
}

Outcome exact_first_interval() {
    const ModelParams base = derive_params(0.0, 1.0, 0.15);
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back(base.t_h * i / 1000.0);
    double worst = 0.0;
    for (int j = 0; j < 20; ++j) {
        const AmplitudeSeries s = survival_probability_series(with_alpha(base, j / 20.0), grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, std::abs(s.survival[i] - std::exp(-base.gamma * grid[i])));
    }
    return {worst <= 1e-12, format("max |P_i - exp(-gamma t)| over 20 alphas %.3g (<= 1e-12)", worst)};
}

Outcome oracle_cross_validation() {
    double worst = 0.0, worst_norm = 0.0, worst_edge = 0.0;
    for (double a : {0.0, 0.25, 0.5}) {
        const ModelParams p = derive_params(a, 1.0, 0.15);
        std::vector<double> grid;
        for (int i = 0; i <= 600; ++i) grid.push_back(3.0 * p.t_h * i / 600.0);
        const PropagationResult num = propagate(PropagatorState::build(p, 1000), grid);
        const AmplitudeSeries exact = survival_probability_series(p, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, std::abs(num.survival[i] - exact.survival[i]));
            worst_norm = std::max(worst_norm, std::abs(num.norm[i] - 1.0));
            worst_edge = std::max(worst_edge, num.edge_population[i]);
        }
    }
    return {worst <= 1e-3 && worst_norm <= 1e-10,
            format("max |P_i numeric - closed form| %.3g (<= 1e-3), max |norm - 1| %.3g (<= 1e-10), "
                   "edge population %.3g",
                   worst, worst_norm, worst_edge)};
}

Outcome cusp_periodicity() {
    // α = 1/4 is left out: its k = 1 cusp has zero amplitude.
    bool ok = true;
    std::string detail;
    for (double a : {3.0 / 7.0, 0.1}) {
        const ModelParams p = derive_params(a, 1.0, 0.15);
        std::vector<double> grid;
        for (int j = 1; j <= 800; ++j) grid.push_back(p.t_h * j / 200.0);
        const AmplitudeSeries s = survival_probability_series(p, grid);
        const KinkReport r = detect_kinks(grid, s.survival, p.t_h, 3);
        double weakest = 1e300;
        for (const Kink& k : r.kinks) weakest = std::min(weakest, std::abs(k.gap()) / k.standard_error);
        ok = ok && r.exact_match() && r.kinks.size() == 3 && weakest >= 5.0;
        std::string locs;
        for (const Kink& k : r.kinks) locs += format(" %.4f", k.location / p.t_h);
        if (!detail.empty()) detail += "; ";
        detail += format("alpha %.4f: t/t_H =%s, min significance %.1f", a, locs.c_str(), weakest);
    }
    return {ok, detail};
}

Outcome order_scaling_property() {
    const ModelParams p = derive_params(0.3, 1.0, 0.1);
    const std::vector<double> g{0.08, 0.04, 0.02};
    const OrderScaling s = order_scaling(p, 2.5 * p.t_h, g);
    return {s.exponent >= 3.6 && s.exponent <= 4.4,
            format("alpha 0.3, t = 2.5 t_H: residuals %.3g %.3g %.3g, fitted p = %.4f (in [3.6, 4.4])",
                   s.residuals[0], s.residuals[1], s.residuals[2], s.exponent)};
}

Outcome validity() {
    const ModelParams p = derive_params(0.3, 1.0, 0.15);
    const ValidityWindow ideal = validity_window(ideal_spectrum(p, 0), p.e_b);
    SpectrumSpec band;
    band.band_lower = -10.0;
    band.band_upper = 10.0;
    band.density = [](double) { return 1.0; };
    const ValidityWindow finite = validity_window(band, 0.0);
    const bool ok = ideal.t_max == p.t_h && ideal.t_min == 0.0 &&
                    std::abs(finite.t_min - 0.2 * kPi) <= 1e-15 * 0.2 * kPi;
    return {ok, format("ideal: t_min %.17g, t_max %.17g (t_H %.17g); band [-10, 10]: t_min %.17g (0.2 pi)",
                       ideal.t_min, ideal.t_max, p.t_h, finite.t_min)};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const std::string base = std::string(QD_TEST_TMPDIR) + "/acceptance_det_";
    const std::vector<std::string> commands{"first-order", "exact --oracle --t-max-over-th 3", "sampling-figure",
                                            "analyze --t-max-over-th 3", "convergence --t-max-over-th 1"};
    bool ok = true;
    std::size_t bytes = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::string files[2];
        for (int rep = 0; rep < 2; ++rep) {
            files[rep] = base + std::to_string(c) + "_" + std::to_string(rep) + ".csv";
            const std::string cmd = std::string("'") + QD_CLI_PATH + "' " + commands[c] + " --out '" + files[rep] +
                                    "' >/dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            ok = ok && WIFEXITED(status) && WEXITSTATUS(status) == 0;
        }
        const std::string a = slurp(files[0]), b = slurp(files[1]);
        ok = ok && !a.empty() && a == b;
        bytes += a.size();
    }
    return {ok, format("%zu commands run twice, %zu bytes compared", commands.size(), bytes)};
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 for no limit
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "first-interval golden rule", 10.0, first_interval_golden_rule},
        {2, "kink structure", 5.0, kink_structure},
        {3, "revival and divergence endpoints", 1.0, revival_divergence},
        {4, "exact first-interval decay", 1.0, exact_first_interval},
        {5, "oracle cross-validation", 60.0, oracle_cross_validation},
        {6, "cusp periodicity", 10.0, cusp_periodicity},
        {7, "order scaling", 120.0, order_scaling_property},
        {8, "validity window", 1.0, validity},
        {9, "determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_s == 0.0 || elapsed < c.limit_s;
        const bool pass = o.ok && in_time;
        if (!pass) ++failed;
        std::string timing = c.limit_s > 0.0 ? format("%.2f s < %.0f s", elapsed, c.limit_s) : format("%.2f s", elapsed);
        if (!in_time) timing += " EXCEEDED";
        std::printf("%s criterion %d %s: %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
