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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eprb/model.h"
#include "eprb/scan.h"

namespace eprb {
namespace {

constexpr double kPi = std::numbers::pi;

CoincidenceCounts counts(std::uint64_t pp, std::uint64_t pm, std::uint64_t mp, std::uint64_t mm,
                         std::uint64_t total) {
    CoincidenceCounts c;
    c.n_pp = pp;
    c.n_pm = pm;
    c.n_mp = mp;
    c.n_mm = mm;
    c.n_total = total;
    return c;
}

TEST(Coincide, WindowIsStrict) {
    EXPECT_TRUE(coincide(5, 5, 1));
    EXPECT_FALSE(coincide(5, 6, 1));
    EXPECT_FALSE(coincide(6, 5, 1));
    EXPECT_TRUE(coincide(100, 384, 285));
    EXPECT_FALSE(coincide(100, 385, 285));
    EXPECT_TRUE(coincide(384, 100, 285));
}

TEST(Tally, EqualTagsAndOppositeOutcomes) {
    std::vector<TrialRecord> trials;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const auto x = static_cast<std::int8_t>(i % 3 ? 1 : -1);
        trials.push_back({i, std::nullopt, {x, 7}, {static_cast<std::int8_t>(-x), 7}});
    }
    const auto c = tally(trials, 1);
    EXPECT_EQ(c.n_pm + c.n_mp, c.n_total);
    EXPECT_EQ(c.n_pp, 0u);
    EXPECT_EQ(c.n_mm, 0u);
    EXPECT_EQ(c.n_total, 10u);
}

TEST(Tally, NoCoincidences) {
    std::vector<TrialRecord> trials{{0, std::nullopt, {1, 0}, {1, 10}}, {1, std::nullopt, {-1, 20}, {1, 0}}};
    const auto c = tally(trials, 5);
    EXPECT_EQ(c.n_coinc(), 0u);
    EXPECT_EQ(c.n_total, 2u);
    const auto e = estimate(c);
    EXPECT_FALSE(e.e.has_value());
    EXPECT_FALSE(e.e1.has_value());
    EXPECT_FALSE(e.e2.has_value());
    EXPECT_FALSE(e.stderr_e.has_value());
    EXPECT_EQ(e.gamma, 0.0);
}

TEST(Tally, MergeOfBlocksEqualsTallyOfConcatenation) {
    const SimParams p(16, 1000, 3, 30000, 5);
    const auto trials = run_pairs(Setting::z_axis(), Setting::planar(1.0), p);
    const std::span<const TrialRecord> all(trials);
    const auto a = tally(all.subspan(0, 7000), p.w_bins());
    const auto b = tally(all.subspan(7000, 11000), p.w_bins());
    const auto c = tally(all.subspan(18000), p.w_bins());
    EXPECT_EQ(a + b + c, tally(all, p.w_bins()));
    EXPECT_EQ((a + b) + c, a + (b + c));
    auto d = a + b;
    d -= b;
    EXPECT_EQ(d, a);
}

TEST(Tally, BlockedTotalsMatchPlainTally) {
    const SimParams p(1, 100, 3, 12345, 6);
    const auto trials = run_pairs(Setting::z_axis(), Setting::planar(0.5), p);
    const auto blocked = tally_blocked(trials, p.w_bins());
    EXPECT_EQ(blocked.blocks.size(), kJackknifeBlocks);
    EXPECT_EQ(blocked.total(), tally(trials, p.w_bins()));
}

TEST(Blocks, PartitionTrialRange) {
    for (const std::uint64_t n : {1ull, 7ull, 100ull, 101ull, 12345ull, 1000000ull}) {
        const std::size_t b = jackknife_block_count(n);
        ASSERT_GE(b, 1u);
        ASSERT_LE(b, kJackknifeBlocks);
        EXPECT_EQ(block_begin(0, b, n), 0u);
        EXPECT_EQ(block_begin(b, b, n), n);
        for (std::size_t i = 0; i < b; ++i) EXPECT_LT(block_begin(i, b, n), block_begin(i + 1, b, n));
    }
}

TEST(Estimate, PerfectAnticorrelation) {
    const auto e = estimate(counts(0, 50, 50, 0, 1000));
    EXPECT_EQ(*e.e, -1.0);
    EXPECT_EQ(*e.e1, 0.0);
    EXPECT_EQ(*e.e2, 0.0);
    EXPECT_DOUBLE_EQ(e.gamma, 0.1);
    EXPECT_EQ(e.n_coinc, 100u);
}

TEST(Estimate, Uncorrelated) {
    const auto e = estimate(counts(25, 25, 25, 25, 100));
    EXPECT_EQ(*e.e, 0.0);
    EXPECT_EQ(e.gamma, 1.0);
}

TEST(Estimate, SingleStationAverages) {
    const auto e = estimate(counts(10, 20, 30, 40, 200));
    EXPECT_DOUBLE_EQ(*e.e, (10.0 + 40 - 20 - 30) / 100);
    EXPECT_DOUBLE_EQ(*e.e1, (10.0 + 20 - 30 - 40) / 100);
    EXPECT_DOUBLE_EQ(*e.e2, (10.0 + 30 - 20 - 40) / 100);
    EXPECT_DOUBLE_EQ(e.gamma, 0.5);
}

TEST(Estimate, CorrelationEqualsDirectAverageOverCoincidentTrials) {
    const SimParams p(16, 1000, 3, 200000, 12);
    const auto trials = run_pairs(Setting::z_axis(), Setting::planar(2.2), p);
    std::int64_t sum = 0, n = 0;
    for (const auto& t : trials) {
        if (coincide(t.ev1.k, t.ev2.k, p.w_bins())) {
            sum += t.ev1.x * t.ev2.x;
            ++n;
        }
    }
    const auto e = estimate(tally(trials, p.w_bins()));
    EXPECT_EQ(*e.e, static_cast<double>(sum) / static_cast<double>(n));
    EXPECT_EQ(e.gamma, static_cast<double>(n) / static_cast<double>(trials.size()));
}

TEST(Estimate, EqualSettingsGiveExactAnticorrelationForAnyWindow) {
    for (const std::int64_t w : {1, 16, 285, 2000}) {
        for (const double d : {1.0, 3.0, 5.0}) {
            const Setting a = Setting::planar(0.8);
            const auto e = estimate(simulate_counts(a, a, SimParams(w, 1000, d, 50000, 13)));
            ASSERT_TRUE(e.e.has_value());
            EXPECT_EQ(*e.e, -1.0) << "w=" << w << " d=" << d;
        }
    }
}

TEST(Estimate, GammaIsNonDecreasingInWindow) {
    const Setting a1 = Setting::z_axis();
    const Setting a2 = Setting::planar(1.3);
    double prev = 0.0;
    for (const std::int64_t w : {1, 2, 4, 16, 64, 285, 600, 1001}) {
        const auto e = estimate(simulate_counts(a1, a2, SimParams(w, 1000, 3, 100000, 14)));
        EXPECT_GE(e.gamma, prev);
        EXPECT_GE(e.gamma, 0.0);
        EXPECT_LE(e.gamma, 1.0);
        prev = e.gamma;
    }
    EXPECT_EQ(prev, 1.0);
}

TEST(Estimate, JackknifeErrorIsCloseToBinomial) {
    const auto blocked = simulate_counts(Setting::z_axis(), Setting::planar(1.0), SimParams(16, 1000, 3, 1000000, 15));
    const auto jk = estimate(blocked);
    const auto plain = estimate(blocked.total());
    ASSERT_TRUE(jk.stderr_e && plain.stderr_e);
    EXPECT_EQ(*jk.e, *plain.e);
    EXPECT_NEAR(*jk.stderr_e / *plain.stderr_e, 1.0, 0.3);
    EXPECT_NEAR(jk.stderr_gamma / plain.stderr_gamma, 1.0, 0.3);
}

TEST(Estimate, GammaAtRightAngleSameBinWindow) {
    const auto e = estimate(
        simulate_counts(Setting::z_axis(), Setting::planar(kPi / 2), SimParams(1, 1000, 3, 1000000, 42)));
    EXPECT_NEAR(e.gamma, 4.0 / kPi * 1e-3, 0.1 * 1.27e-3);
}

TEST(MatchStreams, SinglePair) {
    const std::vector<TimeTag> a{{0, 0, 1}};
    const std::vector<TimeTag> b{{0, 0, -1}};
    const auto m = match_streams(a, b, 1, 1, 1);
    EXPECT_EQ(m.n_pairs, 1u);
    EXPECT_EQ(m.cell(0, 0).n_pm, 1u);
    EXPECT_EQ(m.cell(0, 0).n_coinc(), 1u);
}

TEST(MatchStreams, NearestWinsWithoutReuse) {
    const std::vector<TimeTag> a{{0, 0, 1}, {1, 0, -1}};
    const std::vector<TimeTag> b{{0, 0, 1}};
    const auto m = match_streams(a, b, 2, 1, 1);
    EXPECT_EQ(m.n_pairs, 1u);
    EXPECT_EQ(m.cell(0, 0).n_pp, 1u);

    const std::vector<TimeTag> b2{{1, 0, 1}};
    const auto m2 = match_streams(a, b2, 2, 1, 1);
    EXPECT_EQ(m2.n_pairs, 1u);
    EXPECT_EQ(m2.cell(0, 0).n_mp, 1u);
}

TEST(MatchStreams, CountsPerSettingCell) {
    const std::vector<TimeTag> a{{0, 0, 1}, {10, 1, 1}, {20, 1, -1}, {30, 0, 1}};
    const std::vector<TimeTag> b{{0, 1, 1}, {10, 0, -1}, {21, 1, -1}, {40, 0, 1}};
    const auto m = match_streams(a, b, 2, 2, 2);
    EXPECT_EQ(m.n_pairs, 3u);
    EXPECT_EQ(m.cell(0, 1).n_pp, 1u);
    EXPECT_EQ(m.cell(1, 0).n_pm, 1u);
    EXPECT_EQ(m.cell(1, 1).n_mm, 1u);
    EXPECT_EQ(m.cell(0, 0).n_coinc(), 0u);
}

TEST(MatchStreams, RejectsUnsortedAndOutOfRangeInput) {
    const std::vector<TimeTag> sorted{{0, 0, 1}, {5, 0, 1}};
    const std::vector<TimeTag> unsorted{{5, 0, 1}, {0, 0, 1}};
    EXPECT_THROW(match_streams(unsorted, sorted, 1, 1, 1), std::invalid_argument);
    EXPECT_THROW(match_streams(sorted, unsorted, 1, 1, 1), std::invalid_argument);
    const std::vector<TimeTag> bad_index{{0, 3, 1}};
    EXPECT_THROW(match_streams(bad_index, sorted, 1, 2, 1), std::invalid_argument);
    EXPECT_THROW(match_streams(sorted, sorted, 0, 1, 1), std::invalid_argument);
}

TEST(MatchStreams, PairsAtMostOncePerEvent) {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<std::uint64_t> step(0, 4);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<TimeTag> a, b;
        std::uint64_t ka = 0, kb = 0;
        for (int i = 0; i < 200; ++i) {
            a.push_back({ka += step(gen), 0, 1});
            b.push_back({kb += step(gen), 0, -1});
        }
        const auto m = match_streams(a, b, 3, 1, 1);
        EXPECT_LE(m.n_pairs, std::min(a.size(), b.size()));
        EXPECT_EQ(m.cell(0, 0).n_pm, m.n_pairs);
    }
}

}  // namespace
}  // namespace eprb
