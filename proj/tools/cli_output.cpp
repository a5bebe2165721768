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

#include "cli_output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "cli_config.hpp"

namespace cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return {};
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

ojson cell_json(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return nullptr;
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? ojson(*d) : ojson(nullptr);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

// Metadata values flattened for a comment line.
std::string meta_text(const ojson& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "null";
    if (v.is_array()) {
        std::string out = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ", ";
            out += meta_text(v[i]);
        }
        return out + "]";
    }
    std::string out = "{";
    bool first = true;
    for (const auto& [k, item] : v.items()) {
        if (!first) out += ", ";
        first = false;
        out += k + ": " + meta_text(item);
    }
    return out + "}";
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render_csv(const Table& table) {
    std::string out;
    for (const auto& [key, value] : table.metadata.items()) out += "# " + key + ": " + meta_text(value) + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_text(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& table) {
    ojson doc;
    doc["metadata"] = table.metadata;
    doc["columns"] = table.columns;
    ojson data = ojson::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        ojson column = ojson::array();
        for (const auto& row : table.rows) column.push_back(c < row.size() ? cell_json(row[c]) : ojson(nullptr));
        data[table.columns[c]] = std::move(column);
    }
    doc["data"] = std::move(data);
    return doc.dump(2) + "\n";
}

std::string render(const Table& table, const std::string& format) {
    return format == "json" ? render_json(table) : render_csv(table);
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw CliError(kExitIo, "failed to write to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError(kExitIo, "cannot open output file '" + path + "'");
    out << text;
    out.close();
    if (!out) throw CliError(kExitIo, "failed to write output file '" + path + "'");
}

}  // namespace cli
