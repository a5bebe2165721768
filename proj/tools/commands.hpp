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

#ifndef QUASIDECAY_TOOLS_COMMANDS_HPP
#define QUASIDECAY_TOOLS_COMMANDS_HPP

#include "cli_config.hpp"

namespace cli {

// Each command validates its config, writes its output and returns an exit
// code; failures travel as CliError.
int run_first_order(const RunConfig& cfg);
int run_exact(const RunConfig& cfg);
int run_sampling_figure(const RunConfig& cfg);
int run_analyze(const RunConfig& cfg);
int run_convergence(const RunConfig& cfg);

}  // namespace cli

#endif  // QUASIDECAY_TOOLS_COMMANDS_HPP
