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

#include "eprb/scan.h"

#include "eprb/parallel.h"

namespace eprb {

std::vector<BlockedCounts> scan_settings(const Setting& a1, std::span<const Setting> a2s,
                                         const SimParams& p) {
    const std::size_t m = a2s.size();
    const std::size_t nb = jackknife_block_count(p.n_trials());
    // blocks[b * m + j]: block b of setting j
    std::vector<CoincidenceCounts> blocks(nb * m);
    const std::int64_t w = p.w_bins();

    parallel_for(nb, [&](std::size_t b) {
        CoincidenceCounts* local = blocks.data() + b * m;
        const auto lo = block_begin(b, nb, p.n_trials());
        const auto hi = block_begin(b + 1, nb, p.n_trials());
        for (std::uint64_t n = lo; n < hi; ++n) {
            TrialStream stream = rng_stream(p.seed(), n);
            const HiddenPair h = sample_hidden(stream);
            const StationEvent ev1 = station(a1, h.s, h.lambda1, p);
            const Vec3 s2 = -h.s;
            for (std::size_t j = 0; j < m; ++j) {
                local[j].add(ev1, station(a2s[j], s2, h.lambda2, p), w);
            }
        }
    });

    std::vector<BlockedCounts> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        out[j].blocks.resize(nb);
        for (std::size_t b = 0; b < nb; ++b) out[j].blocks[b] = blocks[b * m + j];
    }
    return out;
}

BlockedCounts simulate_counts(const Setting& a1, const Setting& a2, const SimParams& p) {
    return std::move(scan_settings(a1, std::span(&a2, 1), p).front());
}

std::vector<BlockedCounts> scan_theta(const SimParams& p, std::span<const double> thetas) {
    std::vector<Setting> a2s;
    a2s.reserve(thetas.size());
    for (double t : thetas) a2s.push_back(Setting::planar(t));
    return scan_settings(Setting::z_axis(), a2s, p);
}

}  // namespace eprb
