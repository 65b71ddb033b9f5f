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

#include "eprb/scenarios.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "eprb/manifest.h"

namespace eprb {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("eprb_scenarios_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

SweepResult synthetic_sweep(double (*e_of)(double), double se) {
    SweepResult s{"synthetic", SimParams(1, 1000, 3, 1, 1), {}};
    for (const double t : ThetaGrid::uniform(37).points()) {
        CorrelationEstimate est;
        est.e = e_of(t);
        est.stderr_e = se;
        est.n_coinc = 1000;
        s.rows.push_back({t, est});
    }
    return s;
}

TEST(SweepTheta, AntiParallelSettingsAreCorrelated) {
    const auto s = sweep_theta(SimParams(1, 1000, 3, 1000000, 1), ThetaGrid({kPi / 2, kPi}));
    ASSERT_EQ(s.rows.size(), 2u);
    EXPECT_NEAR(*s.rows[1].estimate.e, 1.0, 0.02);
    EXPECT_NEAR(s.rows[0].estimate.gamma, 1.27e-3, 0.127e-3);
}

TEST(SweepTheta, RowsFollowGrid) {
    const auto grid = ThetaGrid::uniform(7);
    const auto s = sweep_theta(SimParams(16, 1000, 3, 10000, 2), grid, "w16");
    EXPECT_EQ(s.label, "w16");
    ASSERT_EQ(s.rows.size(), 7u);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(s.rows[i].theta, grid.points()[i]);
}

TEST(FitCosine, RecoversExactCosine) {
    const auto s = synthetic_sweep([](double t) { return -0.9 * std::cos(t) + 0.05; }, 0.01);
    const auto f = fit_cosine(s);
    EXPECT_NEAR(f.amplitude, -0.9, 1e-12);
    EXPECT_NEAR(f.offset, 0.05, 1e-12);
    EXPECT_LT(f.max_abs_z, 1e-9);
    EXPECT_FALSE(f.rejects());
    EXPECT_EQ(f.points_used, 37u);
}

TEST(FitCosine, RejectsSawtooth) {
    const auto s = synthetic_sweep([](double t) { return -(1.0 - 2.0 * t / kPi); }, 0.005);
    const auto f = fit_cosine(s);
    EXPECT_TRUE(f.rejects());
    EXPECT_GE(f.max_abs_z, 5.0);
}

TEST(FitCosine, IgnoresUndefinedPoints) {
    auto s = synthetic_sweep([](double t) { return -std::cos(t); }, 0.01);
    s.rows[3].estimate.e.reset();
    s.rows[3].estimate.stderr_e.reset();
    s.rows[4].estimate.stderr_e = 0.0;
    EXPECT_EQ(fit_cosine(s).points_used, 35u);
}

TEST(FitWindow, RejectsUnreachableTargetNamingRange) {
    const SimParams base(1, 50, 3, 20000, 3);
    try {
        fit_window(3.5, base);
        FAIL() << "expected FitError";
    } catch (const FitError& e) {
        EXPECT_NE(std::string(e.what()).find("achievable range"), std::string::npos) << e.what();
    }
    EXPECT_THROW(fit_window(1.5, base), FitError);
}

TEST(FitWindow, DeterministicAndMonotoneTrace) {
    const SimParams base(1, 50, 3, 100000, 4);
    const FitResult a = fit_window(2.4, base, 0.02);
    const FitResult b = fit_window(2.4, base, 0.02);
    EXPECT_EQ(a.fitted_w_bins, b.fitted_w_bins);
    EXPECT_EQ(a.achieved_smax, b.achieved_smax);
    EXPECT_EQ(a.trace.size(), b.trace.size());
    EXPECT_EQ(a.iterations, static_cast<int>(a.trace.size()));
    EXPECT_GE(a.fitted_w_bins, 1);
    EXPECT_LE(a.fitted_w_bins, 50);
    if (a.converged) {
        EXPECT_LE(std::abs(a.achieved_smax - a.target_smax), 0.02);
    }

    auto sorted = a.trace;
    std::sort(sorted.begin(), sorted.end(), [](auto& x, auto& y) { return x.w_bins < y.w_bins; });
    bool monotone = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) monotone &= sorted[i].smax <= sorted[i - 1].smax;
    EXPECT_EQ(monotone, a.monotone_trace);
}

TEST(RunScenario, UnknownIdListsValidIds) {
    try {
        run_scenario("fig9", {}, temp_dir("unknown"));
        FAIL();
    } catch (const UnknownScenario& e) {
        for (const auto& id : scenario_ids()) EXPECT_NE(std::string(e.what()).find(id), std::string::npos);
    }
}

TEST(RunScenario, Fig1WritesThreeTablesAndVerifiableManifest) {
    ScenarioOverrides o;
    o.n_trials = 20000;
    const fs::path dir = temp_dir("fig1");
    const auto out = run_scenario("fig1", o, dir);
    ASSERT_EQ(out.tables.size(), 3u);
    EXPECT_TRUE(fs::exists(dir / "fig1_gamma_w1.csv"));
    EXPECT_TRUE(fs::exists(dir / "fig1_gamma_w16.csv"));
    EXPECT_TRUE(fs::exists(dir / "fig1_gamma_w285.csv"));
    const RunManifest m = read_manifest(out.manifest);
    EXPECT_EQ(m.scenario, "fig1");
    EXPECT_EQ(m.digests.size(), 3u);
    EXPECT_TRUE(verify_digests(m, dir).empty());

    const fs::path again = temp_dir("fig1_again");
    run_scenario("fig1", o, again);
    for (const auto& [name, digest] : m.digests) EXPECT_EQ(slurp(dir / name), slurp(again / name)) << name;
}

TEST(RunScenario, Fig2HasReferenceColumn) {
    ScenarioOverrides o;
    o.n_trials = 20000;
    o.w_bins = 16;
    const fs::path dir = temp_dir("fig2");
    const auto out = run_scenario("fig2", o, dir);
    ASSERT_EQ(out.tables.size(), 1u);
    const std::string text = slurp(dir / "fig2_correlation_w16.csv");
    EXPECT_EQ(text.substr(0, text.find('\n')), "theta,e,stderr_e,minus_cos_theta,e1,e2,n_coinc");
}

TEST(RunScenario, OracleCheckTable) {
    ScenarioOverrides o;
    o.n_trials = 20000;
    const fs::path dir = temp_dir("oracle");
    run_scenario("oracle-check", o, dir);
    const std::string text = slurp(dir / "oracle_check.csv");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 27);
}

TEST(Stability, SweepChangesWithinErrorsWhenTrialsDouble) {
    const auto grid = ThetaGrid::uniform(37);
    const SimParams half(285, 1000, 3, 500000, 5);
    const auto a = sweep_theta(half, grid);
    const auto b = sweep_theta(half.with_n_trials(1000000), grid);
    double sum_e = 0.0, sum_g = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& ea = a.rows[i].estimate;
        const auto& eb = b.rows[i].estimate;
        if (!ea.stderr_e || *ea.stderr_e == 0.0) continue;
        sum_e += std::pow((*eb.e - *ea.e) / *ea.stderr_e, 2);
        sum_g += std::pow((eb.gamma - ea.gamma) / ea.stderr_gamma, 2);
        ++n;
    }
    EXPECT_LT(std::sqrt(sum_e / n), 1.0);
    EXPECT_LT(std::sqrt(sum_g / n), 1.0);
}

}  // namespace
}  // namespace eprb
