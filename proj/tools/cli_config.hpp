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

#ifndef QUASIDECAY_TOOLS_CLI_CONFIG_HPP
#define QUASIDECAY_TOOLS_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitIo = 2,
    kExitNumerical = 3,
};

// Carries the process exit code to main().
class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
    [[nodiscard]] int code() const { return code_; }

private:
    int code_;
};

struct RunConfig {
    double e_b = 0.0;
    bool e_b_set = false;
    double delta = 1.0;
    double g = 0.15;
    std::vector<double> alpha;
    double t_max_over_th = 4.0;
    std::int64_t points_per_interval = 200;
    std::int64_t truncation_n = 1000;
    bool oracle = false;
    std::string format = "csv";
    std::string out = "-";

    // Subcommand extras.
    double sample_t = 1.0;
    std::int64_t sample_count = 10;
    std::int64_t oracle_m = 1000000;
    std::vector<std::int64_t> n_list{100, 300, 1000};
    double tolerance = 1e-4;
    double scaling_t = 2.5;
    std::vector<double> scaling_g{0.08, 0.04, 0.02};
};

// Overlays the keys of a JSON object onto cfg. Unknown keys and wrongly typed
// values raise CliError(kExitConfig).
void apply_config_json(RunConfig& cfg, const nlohmann::json& doc);

// Reads and applies a config file. Unreadable files are I/O errors, bad
// content is a configuration error.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Range checks that do not need the library.
void validate(const RunConfig& cfg, bool analysis);

// Config echo for output metadata.
[[nodiscard]] nlohmann::ordered_json echo(const RunConfig& cfg);

}  // namespace cli

#endif  // QUASIDECAY_TOOLS_CLI_CONFIG_HPP
