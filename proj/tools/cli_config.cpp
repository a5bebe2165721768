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

#include "cli_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

using nlohmann::json;

double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw CliError(kExitConfig, "config key '" + key + "' must be a number");
    return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw CliError(kExitConfig, "config key '" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

template <class T, class F>
std::vector<T> list(const json& v, const std::string& key, F one) {
    std::vector<T> out;
    if (v.is_array()) {
        for (const json& item : v) out.push_back(one(item, key));
    } else {
        out.push_back(one(v, key));
    }
    return out;
}

}  // namespace

void apply_config_json(RunConfig& cfg, const json& doc) {
    if (!doc.is_object()) throw CliError(kExitConfig, "config file must hold a JSON object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "e_b") {
            cfg.e_b = number(v, key);
            cfg.e_b_set = true;
        } else if (key == "delta") {
            cfg.delta = number(v, key);
        } else if (key == "g") {
            cfg.g = number(v, key);
        } else if (key == "alpha") {
            cfg.alpha = list<double>(v, key, number);
        } else if (key == "t_max_over_th") {
            cfg.t_max_over_th = number(v, key);
        } else if (key == "points_per_interval") {
            cfg.points_per_interval = integer(v, key);
        } else if (key == "truncation_n") {
            cfg.truncation_n = integer(v, key);
        } else if (key == "oracle") {
            if (!v.is_boolean()) throw CliError(kExitConfig, "config key 'oracle' must be true or false");
            cfg.oracle = v.get<bool>();
        } else if (key == "format") {
            if (!v.is_string()) throw CliError(kExitConfig, "config key 'format' must be a string");
            cfg.format = v.get<std::string>();
        } else if (key == "out") {
            if (!v.is_string()) throw CliError(kExitConfig, "config key 'out' must be a string");
            cfg.out = v.get<std::string>();
        } else if (key == "sample_t") {
            cfg.sample_t = number(v, key);
        } else if (key == "sample_count") {
            cfg.sample_count = integer(v, key);
        } else if (key == "oracle_m") {
            cfg.oracle_m = integer(v, key);
        } else if (key == "n_list") {
            cfg.n_list = list<std::int64_t>(v, key, integer);
        } else if (key == "tolerance") {
            cfg.tolerance = number(v, key);
        } else if (key == "scaling_t") {
            cfg.scaling_t = number(v, key);
        } else if (key == "scaling_g") {
            cfg.scaling_g = list<double>(v, key, number);
        } else {
            throw CliError(kExitConfig, "unknown config key '" + key + "'");
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(kExitIo, "cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw CliError(kExitIo, "error while reading config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw CliError(kExitConfig, "config file '" + path + "' is not valid JSON: " + e.what());
    }
    apply_config_json(cfg, doc);
}

void validate(const RunConfig& cfg, bool analysis) {
    auto bad = [](const std::string& what) { throw CliError(kExitConfig, what); };
    if (!std::isfinite(cfg.e_b)) bad("--e-b must be finite");
    if (!(std::isfinite(cfg.delta) && cfg.delta > 0.0)) bad("--delta must be positive and finite");
    if (!(std::isfinite(cfg.g) && cfg.g >= 0.0)) bad("--g must be non-negative and finite");
    for (double a : cfg.alpha)
        if (!(a >= 0.0 && a < 1.0)) bad("--alpha values must lie in [0, 1)");
    if (!(std::isfinite(cfg.t_max_over_th) && cfg.t_max_over_th > 0.0)) bad("--t-max-over-th must be positive");
    if (cfg.points_per_interval < 1) bad("--points-per-interval must be positive");
    if (analysis && cfg.points_per_interval < 50)
        bad("analysis needs at least 50 points per interval (got " + std::to_string(cfg.points_per_interval) + ")");
    if (cfg.truncation_n < 1) bad("--truncation-n must be positive");
    if (cfg.format != "csv" && cfg.format != "json") bad("--format must be csv or json");
    if (cfg.out.empty()) bad("--out must not be empty");
    if (!(std::isfinite(cfg.sample_t) && cfg.sample_t > 0.0)) bad("--sample-T must be positive");
    if (cfg.sample_count < 0) bad("--sample-count must be non-negative");
    if (cfg.oracle_m < 1) bad("--oracle-m must be positive");
    if (cfg.n_list.empty()) bad("--n-list must not be empty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < 1) bad("--n-list entries must be positive");
        if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) bad("--n-list must be strictly increasing");
    }
    if (!(cfg.tolerance > 0.0)) bad("--tolerance must be positive");
    if (!(std::isfinite(cfg.scaling_t) && cfg.scaling_t > 0.0)) bad("--scaling-t must be positive");
    for (double g : cfg.scaling_g)
        if (!(std::isfinite(g) && g >= 0.0)) bad("--scaling-g values must be non-negative");
}

nlohmann::ordered_json echo(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    if (cfg.e_b_set) j["e_b"] = cfg.e_b;
    j["delta"] = cfg.delta;
    j["g"] = cfg.g;
    j["t_max_over_th"] = cfg.t_max_over_th;
    j["points_per_interval"] = cfg.points_per_interval;
    j["truncation_n"] = cfg.truncation_n;
    j["oracle"] = cfg.oracle;
    return j;
}

}  // namespace cli
