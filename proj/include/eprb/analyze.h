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

#ifndef EPRB_ANALYZE_H_
#define EPRB_ANALYZE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "eprb/coincidence.h"
#include "eprb/inequalities.h"
#include "eprb/ttag.h"

namespace eprb {

/// Planar setting angles (radians, see Setting::planar) per station,
/// indexed by TimeTag::setting_index.
struct SettingsTable {
    std::vector<double> station_a;
    std::vector<double> station_b;
};

struct PairReport {
    std::size_t setting_a = 0;
    std::size_t setting_b = 0;
    double theta = 0.0;  // separation of the two settings
    CoincidenceCounts counts;
    CorrelationEstimate estimate;
};

struct AnalysisReport {
    std::vector<PairReport> pairs;  // row-major over (setting_a, setting_b)
    std::uint64_t n_pairs = 0;
    /// Smallest per-pair coincidence frequency: the infimum-style gamma.
    double gamma_min_over_pairs = 0.0;
    /// Sum of the per-pair frequencies over all setting pairs.
    double gamma_sum_over_pairs = 0.0;
    /// All coincidences over all attributed trials.
    double gamma_pooled = 0.0;
    /// Present for 2x2 tables with coincidences in every cell:
    /// E(a,c) - E(a,d) + E(b,c) + E(b,d) with (a,b) = A settings 0,1 and
    /// (c,d) = B settings 0,1.
    std::optional<double> s;
    std::optional<double> bound_lg;
    std::optional<ViolationFlags> flags;
};

/// Throws std::invalid_argument when a setting index has no table entry.
AnalysisReport analyze_streams(std::span<const TimeTag> a, std::span<const TimeTag> b,
                               const SettingsTable& settings, std::int64_t w_bins);

AnalysisReport analyze_external(const std::filesystem::path& file_a, const std::filesystem::path& file_b,
                                const SettingsTable& settings, std::int64_t w_bins);

struct SimulatedExperiment {
    StationStreams streams;
    std::vector<CoincidenceCounts> in_memory;  // row-major over the table
};

/// Runs p.n_trials() trials for every setting pair of the table, pair after
/// pair with consecutive global trial indices, and exports both stations.
/// `in_memory` holds the direct tallies of those same trials.
SimulatedExperiment simulate_experiment(const SettingsTable& settings, const SimParams& p);

}  // namespace eprb

#endif  // EPRB_ANALYZE_H_
