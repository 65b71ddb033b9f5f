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

#ifndef EPRB_RESULTS_CSV_H_
#define EPRB_RESULTS_CSV_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eprb {

struct SweepResult;

/// 17 significant digits, C locale; round-trips every double.
std::string format_real(double v);
std::string format_real(const std::optional<double>& v);  // empty when absent

/// Locale-independent decimal parse of the whole string.
std::optional<double> parse_real(std::string_view s);

class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    /// Throws std::invalid_argument if the row width differs from the header.
    void add_row(std::vector<std::string> row);

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    std::string to_string() const;
    void write(const std::filesystem::path& path) const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// theta,e,stderr_e,e1,e2,gamma,stderr_gamma,n_coinc,n_total
CsvTable sweep_table(const SweepResult& sweep);
/// theta,gamma,stderr_gamma,n_coinc,n_total
CsvTable gamma_table(const SweepResult& sweep);
/// theta,e,stderr_e,minus_cos_theta,e1,e2,n_coinc
CsvTable correlation_table(const SweepResult& sweep);

}  // namespace eprb

#endif  // EPRB_RESULTS_CSV_H_
