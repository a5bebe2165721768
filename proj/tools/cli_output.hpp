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

#ifndef QUASIDECAY_TOOLS_CLI_OUTPUT_HPP
#define QUASIDECAY_TOOLS_CLI_OUTPUT_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace cli {

// monostate is an empty cell: blank in CSV, null in JSON.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

// A rectangular data set with a metadata block. Insertion order is kept
// everywhere so output is reproducible byte for byte.
struct Table {
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// 17 significant digits; non-finite values as nan, inf, -inf.
[[nodiscard]] std::string format_double(double v);

// '#'-prefixed "key: value" metadata lines, a header row, then the rows.
[[nodiscard]] std::string render_csv(const Table& table);

// {"metadata": {...}, "columns": [...], "data": {column: [values]}}.
// Non-finite numbers become null.
[[nodiscard]] std::string render_json(const Table& table);

[[nodiscard]] std::string render(const Table& table, const std::string& format);

// "-" is standard output. Failures raise CliError(kExitIo).
void write_output(const std::string& path, const std::string& text);

}  // namespace cli

#endif  // QUASIDECAY_TOOLS_CLI_OUTPUT_HPP
