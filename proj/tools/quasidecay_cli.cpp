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

// quasidecay: decay of a discrete level into an equidistant quasi-continuum.
//
//   quasidecay first-order     closed-form W_α(T) and P(t), optional direct sum
//   quasidecay exact           all-orders survival amplitude, optional numeric overlay
//   quasidecay sampling-figure sinc² curve and its periodic samples
//   quasidecay analyze         kinks, rate fits, breakdown table, order scaling
//   quasidecay convergence     truncation study of the numeric propagator

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "commands.hpp"
#include "quasidecay/quasidecay.h"

namespace {

// Raw flag targets; only options that were actually given are copied over
// the config file values.
struct Flags {
    double e_b = 0.0, delta = 0.0, g = 0.0, t_max = 0.0, sample_t = 0.0, tolerance = 0.0, scaling_t = 0.0;
    std::vector<double> alpha, scaling_g;
    std::int64_t ppi = 0, truncation_n = 0, sample_count = 0, oracle_m = 0;
    std::vector<std::int64_t> n_list;
    bool oracle = false;
    std::string format, out, config;
};

struct Sub {
    CLI::App* app = nullptr;
    std::function<int(const cli::RunConfig&)> run;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--e-b", f.e_b, "energy of the discrete level");
    app->add_option("--delta", f.delta, "level spacing (default 1)");
    app->add_option("--g", f.g, "coupling strength (default 0.15)");
    app->add_option("--alpha", f.alpha, "offset fraction in [0, 1); repeatable")->take_all();
    app->add_option("--t-max-over-th", f.t_max, "time span in Heisenberg times (default 4)");
    app->add_option("--points-per-interval", f.ppi, "grid points per Heisenberg time (default 200)");
    app->add_option("--truncation-n", f.truncation_n, "propagator half width N (default 1000)");
    app->add_flag("--oracle", f.oracle, "enable the independent oracle columns");
    app->add_option("--format", f.format, "csv or json (default csv)")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", f.out, "output path, - for standard output");
    app->add_option("--config", f.config, "JSON config file; flags override its values");
}

void overlay(cli::RunConfig& cfg, const CLI::App* app, const Flags& f) {
    auto given = [app](const char* name) { return app->get_option_no_throw(name) && app->count(name) > 0; };
    if (given("--e-b")) {
        cfg.e_b = f.e_b;
        cfg.e_b_set = true;
    }
    if (given("--delta")) cfg.delta = f.delta;
    if (given("--g")) cfg.g = f.g;
    if (given("--alpha")) cfg.alpha = f.alpha;
    if (given("--t-max-over-th")) cfg.t_max_over_th = f.t_max;
    if (given("--points-per-interval")) cfg.points_per_interval = f.ppi;
    if (given("--truncation-n")) cfg.truncation_n = f.truncation_n;
    if (given("--oracle")) cfg.oracle = f.oracle;
    if (given("--format")) cfg.format = f.format;
    if (given("--out")) cfg.out = f.out;
    if (given("--sample-T")) cfg.sample_t = f.sample_t;
    if (given("--sample-count")) cfg.sample_count = f.sample_count;
    if (given("--oracle-m")) cfg.oracle_m = f.oracle_m;
    if (given("--n-list")) cfg.n_list = f.n_list;
    if (given("--tolerance")) cfg.tolerance = f.tolerance;
    if (given("--scaling-t")) cfg.scaling_t = f.scaling_t;
    if (given("--scaling-g")) cfg.scaling_g = f.scaling_g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay of a discrete level into an equidistant quasi-continuum"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qd_version()));
    Flags f;

    std::vector<Sub> subs;
    auto add = [&](const char* name, const char* help, std::function<int(const cli::RunConfig&)> run) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, f);
        subs.push_back({sub, std::move(run)});
        return sub;
    };

    CLI::App* first = add("first-order", "closed-form first-order transition probability", cli::run_first_order);
    first->add_option("--oracle-m", f.oracle_m, "direct-sum truncation M (default 1e6)");
    add("exact", "all-orders survival amplitude", cli::run_exact);
    CLI::App* sampling = add("sampling-figure", "sinc^2 curve with periodic samples", cli::run_sampling_figure);
    sampling->add_option("--sample-T", f.sample_t, "dimensionless time T of the samples (default 1)");
    sampling->add_option("--sample-count", f.sample_count, "samples for |m| <= count (default 10)");
    CLI::App* analyze = add("analyze", "kinks, rate fits, golden-rule breakdown, order scaling", cli::run_analyze);
    analyze->add_option("--scaling-t", f.scaling_t, "order-scaling time in Heisenberg times (default 2.5)");
    analyze->add_option("--scaling-g", f.scaling_g, "order-scaling couplings (default 0.08 0.04 0.02)")->take_all();
    CLI::App* conv = add("convergence", "truncation convergence of the numeric propagator", cli::run_convergence);
    conv->add_option("--n-list", f.n_list, "increasing half widths, last is the reference (default 100 300 1000)")
        ->take_all();
    conv->add_option("--tolerance", f.tolerance, "convergence tolerance on P_i (default 1e-4)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? cli::kExitOk : cli::kExitConfig;
    }

    for (const Sub& s : subs) {
        if (!s.app->parsed()) continue;
        try {
            cli::RunConfig cfg;
            if (s.app->count("--config") > 0) cli::apply_config_file(cfg, f.config);
            overlay(cfg, s.app, f);
            return s.run(cfg);
        } catch (const cli::CliError& e) {
            std::cerr << "quasidecay " << s.app->get_name() << ": " << e.what() << "\n";
            return e.code();
        } catch (const std::exception& e) {
            std::cerr << "quasidecay " << s.app->get_name() << ": " << e.what() << "\n";
            return cli::kExitNumerical;
        }
    }
    return cli::kExitConfig;
}
