// Copyright 2026 The eprbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eprb/results_csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eprb/scenarios.h"

namespace eprb {

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::optional<double> parse_real(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) {
        throw std::invalid_argument("CsvTable: row has " + std::to_string(row.size()) +
                                    " fields, header has " + std::to_string(header_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << to_string();
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

CsvTable sweep_table(const SweepResult& sweep) {
    CsvTable t({"theta", "e", "stderr_e", "e1", "e2", "gamma", "stderr_gamma", "n_coinc", "n_total"});
    for (const auto& r : sweep.rows) {
        const auto& e = r.estimate;
        t.add_row({format_real(r.theta), format_real(e.e), format_real(e.stderr_e), format_real(e.e1),
                   format_real(e.e2), format_real(e.gamma), format_real(e.stderr_gamma),
                   std::to_string(e.n_coinc), std::to_string(e.n_total)});
    }
    return t;
}

CsvTable gamma_table(const SweepResult& sweep) {
    CsvTable t({"theta", "gamma", "stderr_gamma", "n_coinc", "n_total"});
    for (const auto& r : sweep.rows) {
        const auto& e = r.estimate;
        t.add_row({format_real(r.theta), format_real(e.gamma), format_real(e.stderr_gamma),
                   std::to_string(e.n_coinc), std::to_string(e.n_total)});
    }
    return t;
}

CsvTable correlation_table(const SweepResult& sweep) {
    CsvTable t({"theta", "e", "stderr_e", "minus_cos_theta", "e1", "e2", "n_coinc"});
    for (const auto& r : sweep.rows) {
        const auto& e = r.estimate;
        t.add_row({format_real(r.theta), format_real(e.e), format_real(e.stderr_e),
                   format_real(-std::cos(r.theta)), format_real(e.e1), format_real(e.e2),
                   std::to_string(e.n_coinc)});
    }
    return t;
}

}  // namespace eprb
