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

#ifndef QUASIDECAY_TOOLS_QD_HANDLES_HPP
#define QUASIDECAY_TOOLS_QD_HANDLES_HPP

#include <memory>
#include <string>

#include "cli_config.hpp"
#include "quasidecay/quasidecay.h"

namespace cli {

template <class T, void (*Destroy)(T*)>
struct Destroyer {
    void operator()(T* p) const { Destroy(p); }
};

using Model = std::unique_ptr<qd_model, Destroyer<qd_model, qd_model_destroy>>;
using Series = std::unique_ptr<qd_series, Destroyer<qd_series, qd_series_destroy>>;
using Propagator = std::unique_ptr<qd_propagator, Destroyer<qd_propagator, qd_propagator_destroy>>;
using Propagation = std::unique_ptr<qd_propagation, Destroyer<qd_propagation, qd_propagation_destroy>>;
using Convergence = std::unique_ptr<qd_convergence, Destroyer<qd_convergence, qd_convergence_destroy>>;
using KinkReport = std::unique_ptr<qd_kink_report, Destroyer<qd_kink_report, qd_kink_report_destroy>>;
using Breakdown = std::unique_ptr<qd_breakdown, Destroyer<qd_breakdown, qd_breakdown_destroy>>;

// Library failures become exit codes: bad inputs are configuration errors,
// everything else is a numerical failure.
inline void check(qd_status status) {
    if (status == QD_OK) return;
    const std::string message = std::string(qd_status_name(status)) + ": " + qd_last_error();
    switch (status) {
        case QD_ERR_PARAMETER:
        case QD_ERR_DOMAIN:
            throw CliError(kExitConfig, message);
        default:
            throw CliError(kExitNumerical, message);
    }
}

}  // namespace cli

#endif  // QUASIDECAY_TOOLS_QD_HANDLES_HPP
