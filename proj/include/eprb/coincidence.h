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

#ifndef EPRB_COINCIDENCE_H_
#define EPRB_COINCIDENCE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eprb/model.h"

namespace eprb {

/// Same-window test on integer tags: |k1 - k2| < w_bins. With w_bins == 1
/// only tags in the same bin coincide.
constexpr bool coincide(std::int64_t k1, std::int64_t k2, std::int64_t w_bins) {
    const std::int64_t diff = k1 > k2 ? k1 - k2 : k2 - k1;
    return diff < w_bins;
}

/// Outcome-pair tallies over the coincident subset of a run, plus the
/// number of trials and the all-trial single-station "+1" counts (the
/// latter are diagnostics, not used for post-selected averages).
struct CoincidenceCounts {
    std::uint64_t n_pp = 0;
    std::uint64_t n_pm = 0;
    std::uint64_t n_mp = 0;
    std::uint64_t n_mm = 0;
    std::uint64_t n_total = 0;
    std::uint64_t singles1_plus = 0;
    std::uint64_t singles2_plus = 0;

    std::uint64_t n_coinc() const { return n_pp + n_pm + n_mp + n_mm; }

    void add_coincident(int x1, int x2) {
        if (x1 > 0) {
            (x2 > 0 ? n_pp : n_pm) += 1;
        } else {
            (x2 > 0 ? n_mp : n_mm) += 1;
        }
    }

    void add(StationEvent ev1, StationEvent ev2, std::int64_t w_bins) {
        ++n_total;
        singles1_plus += ev1.x > 0;
        singles2_plus += ev2.x > 0;
        if (coincide(ev1.k, ev2.k, w_bins)) add_coincident(ev1.x, ev2.x);
    }

    CoincidenceCounts& operator+=(const CoincidenceCounts& o);
    /// Componentwise difference; `o` must be a sub-tally of *this.
    CoincidenceCounts& operator-=(const CoincidenceCounts& o);
    friend CoincidenceCounts operator+(CoincidenceCounts a, const CoincidenceCounts& b) {
        return a += b;
    }
    friend bool operator==(const CoincidenceCounts&, const CoincidenceCounts&) = default;
};

inline constexpr std::size_t kJackknifeBlocks = 100;

/// Tallies split into contiguous trial-index blocks for jackknife errors.
/// Block b covers trials [b*N/B, (b+1)*N/B).
struct BlockedCounts {
    std::vector<CoincidenceCounts> blocks;
    CoincidenceCounts total() const;
};

std::size_t jackknife_block_count(std::uint64_t n_trials);
/// First trial index of block b out of `blocks`.
std::uint64_t block_begin(std::size_t b, std::size_t blocks, std::uint64_t n_trials);

CoincidenceCounts tally(std::span<const TrialRecord> trials, std::int64_t w_bins);
BlockedCounts tally_blocked(std::span<const TrialRecord> trials, std::int64_t w_bins);

struct CorrelationEstimate {
    // Undefined (nullopt) when no trial is coincident.
    std::optional<double> e;
    std::optional<double> e1;
    std::optional<double> e2;
    std::optional<double> stderr_e;
    double gamma = 0.0;
    double stderr_gamma = 0.0;
    std::uint64_t n_coinc = 0;
    std::uint64_t n_total = 0;
    // Single-station averages over all trials; diagnostic only.
    double e1_all = 0.0;
    double e2_all = 0.0;
};

/// Point estimates with the large-sample standard error sqrt((1-e^2)/n_coinc).
CorrelationEstimate estimate(const CoincidenceCounts& counts);
/// Point estimates from the merged blocks; errors by delete-one-block jackknife.
CorrelationEstimate estimate(const BlockedCounts& counts);

/// One record of an externally recorded (or exported) single-station stream.
struct TimeTag {
    std::uint64_t k = 0;
    std::uint32_t setting_index = 0;
    std::int8_t x = 1;
    friend bool operator==(const TimeTag&, const TimeTag&) = default;
};

struct MatchResult {
    std::size_t settings_a = 0;
    std::size_t settings_b = 0;
    std::vector<CoincidenceCounts> cells;  // row-major [setting_a][setting_b]
    std::uint64_t n_pairs = 0;

    const CoincidenceCounts& cell(std::size_t ia, std::size_t ib) const {
        return cells[ia * settings_b + ib];
    }
};

/// Pairs two tag-sorted streams greedily: walking both streams, the current
/// heads are paired when |dk| < w_bins unless the next event of either stream
/// is strictly closer to the other head. Every event is used at most once.
///
/// Trial totals per cell are attributed by proximity: each stream-A event is
/// counted in the cell of its own setting and the setting of the nearest
/// stream-B event (earlier event on ties); stream-B singles likewise.
///
/// Throws std::invalid_argument on unsorted input or a setting index outside
/// [0, settings_x).
MatchResult match_streams(std::span<const TimeTag> a, std::span<const TimeTag> b,
                          std::int64_t w_bins, std::size_t settings_a, std::size_t settings_b);

}  // namespace eprb

#endif  // EPRB_COINCIDENCE_H_
