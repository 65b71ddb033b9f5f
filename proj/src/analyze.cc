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

#include "eprb/analyze.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eprb {

AnalysisReport analyze_streams(std::span<const TimeTag> a, std::span<const TimeTag> b,
                               const SettingsTable& settings, std::int64_t w_bins) {
    const MatchResult m =
        match_streams(a, b, w_bins, settings.station_a.size(), settings.station_b.size());

    AnalysisReport r;
    r.n_pairs = m.n_pairs;
    CoincidenceCounts pooled;
    r.gamma_min_over_pairs = std::numeric_limits<double>::infinity();
    for (std::size_t ia = 0; ia < m.settings_a; ++ia) {
        for (std::size_t ib = 0; ib < m.settings_b; ++ib) {
            PairReport p;
            p.setting_a = ia;
            p.setting_b = ib;
            p.theta = planar_separation(settings.station_a[ia], settings.station_b[ib]);
            p.counts = m.cell(ia, ib);
            p.estimate = estimate(p.counts);
            pooled += p.counts;
            r.gamma_min_over_pairs = std::min(r.gamma_min_over_pairs, p.estimate.gamma);
            r.gamma_sum_over_pairs += p.estimate.gamma;
            r.pairs.push_back(std::move(p));
        }
    }
    r.gamma_pooled = estimate(pooled).gamma;

    if (m.settings_a == 2 && m.settings_b == 2 &&
        std::all_of(r.pairs.begin(), r.pairs.end(), [](const PairReport& p) { return p.estimate.e.has_value(); })) {
        r.s = s_value(*r.pairs[0].estimate.e, *r.pairs[1].estimate.e, *r.pairs[2].estimate.e,
                      *r.pairs[3].estimate.e);
        if (r.gamma_min_over_pairs > 0.0) {
            r.bound_lg = lg_bound(r.gamma_min_over_pairs);
            r.flags = check_violations(*r.s, r.gamma_min_over_pairs);
        }
    }
    return r;
}

AnalysisReport analyze_external(const std::filesystem::path& file_a, const std::filesystem::path& file_b,
                                const SettingsTable& settings, std::int64_t w_bins) {
    const auto a = read_events(file_a);
    const auto b = read_events(file_b);
    return analyze_streams(a, b, settings, w_bins);
}

SimulatedExperiment simulate_experiment(const SettingsTable& settings, const SimParams& p) {
    SimulatedExperiment out;
    const std::uint64_t n = p.n_trials();
    std::uint64_t first = 0;
    for (std::size_t ia = 0; ia < settings.station_a.size(); ++ia) {
        for (std::size_t ib = 0; ib < settings.station_b.size(); ++ib) {
            const Setting a1 = Setting::planar(settings.station_a[ia]);
            const Setting a2 = Setting::planar(settings.station_b[ib]);
            std::vector<TrialRecord> records;
            records.reserve(n);
            CoincidenceCounts counts;
            for_each_trial(a1, a2, p, first, first + n,
                           [&](std::uint64_t idx, const HiddenPair&, StationEvent ev1, StationEvent ev2) {
                               records.push_back({idx, std::nullopt, ev1, ev2});
                               counts.add(ev1, ev2, p.w_bins());
                           });
            export_trials(records, static_cast<std::uint32_t>(ia), static_cast<std::uint32_t>(ib), p,
                          out.streams);
            out.in_memory.push_back(counts);
            first += n;
        }
    }
    return out;
}

}  // namespace eprb
