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

#include "eprb/coincidence.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eprb {

CoincidenceCounts& CoincidenceCounts::operator+=(const CoincidenceCounts& o) {
    n_pp += o.n_pp;
    n_pm += o.n_pm;
    n_mp += o.n_mp;
    n_mm += o.n_mm;
    n_total += o.n_total;
    singles1_plus += o.singles1_plus;
    singles2_plus += o.singles2_plus;
    return *this;
}

CoincidenceCounts& CoincidenceCounts::operator-=(const CoincidenceCounts& o) {
    n_pp -= o.n_pp;
    n_pm -= o.n_pm;
    n_mp -= o.n_mp;
    n_mm -= o.n_mm;
    n_total -= o.n_total;
    singles1_plus -= o.singles1_plus;
    singles2_plus -= o.singles2_plus;
    return *this;
}

CoincidenceCounts BlockedCounts::total() const {
    CoincidenceCounts sum;
    for (const auto& b : blocks) sum += b;
    return sum;
}

std::size_t jackknife_block_count(std::uint64_t n_trials) {
    return n_trials < kJackknifeBlocks ? static_cast<std::size_t>(n_trials) : kJackknifeBlocks;
}

std::uint64_t block_begin(std::size_t b, std::size_t blocks, std::uint64_t n_trials) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * n_trials / blocks);
}

CoincidenceCounts tally(std::span<const TrialRecord> trials, std::int64_t w_bins) {
    CoincidenceCounts c;
    for (const auto& t : trials) c.add(t.ev1, t.ev2, w_bins);
    return c;
}

BlockedCounts tally_blocked(std::span<const TrialRecord> trials, std::int64_t w_bins) {
    const std::size_t nb = jackknife_block_count(trials.size());
    BlockedCounts out;
    out.blocks.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const auto lo = block_begin(b, nb, trials.size());
        const auto hi = block_begin(b + 1, nb, trials.size());
        out.blocks[b] = tally(trials.subspan(lo, hi - lo), w_bins);
    }
    return out;
}

namespace {

struct PointValues {
    std::optional<double> e, e1, e2;
    double gamma = 0.0;
};

PointValues point_values(const CoincidenceCounts& c) {
    PointValues v;
    const auto nc = c.n_coinc();
    v.gamma = c.n_total == 0 ? 0.0 : static_cast<double>(nc) / static_cast<double>(c.n_total);
    if (nc > 0) {
        const auto n = static_cast<double>(nc);
        const auto pp = static_cast<double>(c.n_pp), pm = static_cast<double>(c.n_pm);
        const auto mp = static_cast<double>(c.n_mp), mm = static_cast<double>(c.n_mm);
        v.e = (pp + mm - pm - mp) / n;
        v.e1 = (pp + pm - mp - mm) / n;
        v.e2 = (pp + mp - pm - mm) / n;
    }
    return v;
}

CorrelationEstimate base_estimate(const CoincidenceCounts& c) {
    const PointValues v = point_values(c);
    CorrelationEstimate est;
    est.e = v.e;
    est.e1 = v.e1;
    est.e2 = v.e2;
    est.gamma = v.gamma;
    est.n_coinc = c.n_coinc();
    est.n_total = c.n_total;
    if (c.n_total > 0) {
        const double n = static_cast<double>(c.n_total);
        est.e1_all = (2.0 * static_cast<double>(c.singles1_plus) - n) / n;
        est.e2_all = (2.0 * static_cast<double>(c.singles2_plus) - n) / n;
    }
    return est;
}

// sqrt((n-1)/n * sum (v_i - mean)^2) over leave-one-out values.
double jackknife_stderr(const std::vector<double>& loo) {
    const double n = static_cast<double>(loo.size());
    double mean = 0.0;
    for (double v : loo) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    return std::sqrt((n - 1.0) / n * ss);
}

}  // namespace

CorrelationEstimate estimate(const CoincidenceCounts& counts) {
    CorrelationEstimate est = base_estimate(counts);
    if (est.e) {
        const double var = std::max(0.0, 1.0 - *est.e * *est.e);
        est.stderr_e = std::sqrt(var / static_cast<double>(est.n_coinc));
    }
    if (counts.n_total > 0) {
        est.stderr_gamma = std::sqrt(est.gamma * (1.0 - est.gamma) / static_cast<double>(counts.n_total));
    }
    return est;
}

CorrelationEstimate estimate(const BlockedCounts& counts) {
    const CoincidenceCounts total = counts.total();
    CorrelationEstimate est = base_estimate(total);
    const std::size_t nb = counts.blocks.size();
    if (nb < 2) return estimate(total);

    std::vector<double> loo_e, loo_g;
    loo_e.reserve(nb);
    loo_g.reserve(nb);
    for (const auto& block : counts.blocks) {
        CoincidenceCounts rest = total;
        rest -= block;
        const PointValues v = point_values(rest);
        loo_g.push_back(v.gamma);
        if (v.e) loo_e.push_back(*v.e);
    }
    est.stderr_gamma = jackknife_stderr(loo_g);
    if (est.e && loo_e.size() == nb) est.stderr_e = jackknife_stderr(loo_e);
    return est;
}

namespace {

std::uint64_t tag_distance(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

void validate_stream(std::span<const TimeTag> s, std::size_t settings, const char* name) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].setting_index >= settings) {
            throw std::invalid_argument(std::string("stream ") + name + ": event " +
                                        std::to_string(i) + " has setting index " +
                                        std::to_string(s[i].setting_index) + " outside [0, " +
                                        std::to_string(settings) + ")");
        }
        if (i > 0 && s[i].k < s[i - 1].k) {
            throw std::invalid_argument(std::string("stream ") + name + ": not sorted by tag at event " +
                                        std::to_string(i));
        }
    }
}

// For every event of `from`, the index of the nearest event in `to`
// (earlier on ties). `to` must be non-empty.
std::vector<std::size_t> nearest_indices(std::span<const TimeTag> from, std::span<const TimeTag> to) {
    std::vector<std::size_t> out(from.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        while (j + 1 < to.size() && to[j + 1].k <= from[i].k) ++j;
        std::size_t best = j;
        if (j + 1 < to.size() &&
            tag_distance(to[j + 1].k, from[i].k) < tag_distance(to[j].k, from[i].k)) {
            best = j + 1;
        }
        out[i] = best;
    }
    return out;
}

}  // namespace

MatchResult match_streams(std::span<const TimeTag> a, std::span<const TimeTag> b,
                          std::int64_t w_bins, std::size_t settings_a, std::size_t settings_b) {
    if (w_bins < 1) throw std::invalid_argument("w_bins must be >= 1");
    if (settings_a == 0 || settings_b == 0) {
        throw std::invalid_argument("settings tables must be non-empty");
    }
    validate_stream(a, settings_a, "A");
    validate_stream(b, settings_b, "B");

    MatchResult r;
    r.settings_a = settings_a;
    r.settings_b = settings_b;
    r.cells.resize(settings_a * settings_b);
    auto cell = [&](std::size_t ia, std::size_t ib) -> CoincidenceCounts& {
        return r.cells[ia * settings_b + ib];
    };

    if (!a.empty() && !b.empty()) {
        const auto near_b = nearest_indices(a, b);
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto& c = cell(a[i].setting_index, b[near_b[i]].setting_index);
            ++c.n_total;
            c.singles1_plus += a[i].x > 0;
        }
        const auto near_a = nearest_indices(b, a);
        for (std::size_t j = 0; j < b.size(); ++j) {
            cell(a[near_a[j]].setting_index, b[j].setting_index).singles2_plus += b[j].x > 0;
        }
    }

    const auto w = static_cast<std::uint64_t>(w_bins);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const std::uint64_t dist = tag_distance(a[i].k, b[j].k);
        if (dist >= w) {
            (a[i].k < b[j].k ? i : j) += 1;
            continue;
        }
        if (i + 1 < a.size() && tag_distance(a[i + 1].k, b[j].k) < dist) {
            ++i;
            continue;
        }
        if (j + 1 < b.size() && tag_distance(a[i].k, b[j + 1].k) < dist) {
            ++j;
            continue;
        }
        cell(a[i].setting_index, b[j].setting_index).add_coincident(a[i].x, b[j].x);
        ++r.n_pairs;
        ++i;
        ++j;
    }
    return r;
}

}  // namespace eprb
