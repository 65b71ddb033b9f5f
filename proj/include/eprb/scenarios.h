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

#ifndef EPRB_SCENARIOS_H_
#define EPRB_SCENARIOS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eprb/inequalities.h"
#include "eprb/model.h"

namespace eprb {

struct SweepRow {
    double theta = 0.0;
    CorrelationEstimate estimate;
};

struct SweepResult {
    std::string label;
    SimParams params;
    std::vector<SweepRow> rows;  // strictly increasing theta
};

/// E and Gamma versus theta with a1 = z and a2 = planar(theta); every grid
/// point uses the same per-trial streams.
SweepResult sweep_theta(const SimParams& p, const ThetaGrid& grid, std::string label = {});

/// Weighted least-squares fit E(theta) ~ A cos(theta) + B with weights
/// 1/stderr^2. Points with undefined E or zero standard error (outcomes
/// fixed by geometry, e.g. theta = 0) carry no information and are skipped.
struct CosineFit {
    double amplitude = 0.0;
    double offset = 0.0;
    double max_abs_z = 0.0;
    double theta_at_max_z = 0.0;
    std::size_t points_used = 0;
    bool rejects(double z_threshold = 5.0) const { return max_abs_z >= z_threshold; }
};
CosineFit fit_cosine(const SweepResult& sweep);

class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FitTracePoint {
    std::int64_t w_bins;
    double smax;
    double gamma_inf;
};

struct FitResult {
    double target_smax = 0.0;
    std::int64_t fitted_w_bins = 0;
    double achieved_smax = 0.0;
    double gamma_inf = 0.0;
    double gamma_inf_theta = 0.0;
    double gamma_pair_sum = 0.0;
    int iterations = 0;  // maximize_S evaluations
    bool converged = false;
    bool monotone_trace = true;
    bool used_fallback = false;
    std::vector<FitTracePoint> trace;  // evaluation order
};

/// Integer bisection of w_bins over [1, ceil(t0_ratio)] so that S_max hits
/// `target` within `tolerance`, assuming S_max decreases with the window.
/// Returns the smallest bracket member within tolerance. If the evaluated
/// S_max values are not monotone in w_bins, falls back to a scan over a
/// logarithmic w_bins grid. Throws FitError when the target lies outside
/// [S_max(ceil(t0)), S_max(1)] by more than the tolerance.
FitResult fit_window(double target, const SimParams& base, double tolerance = 0.01,
                     const SearchSpec& search = {});

/// Optional parameter overrides for named scenarios.
struct ScenarioOverrides {
    std::optional<std::uint64_t> n_trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> d;
    std::optional<double> t0_ratio;
    std::optional<std::int64_t> w_bins;  // replaces the scenario's window list
    std::optional<std::size_t> theta_points;
};

struct ScenarioOutput {
    std::string scenario;
    std::vector<std::filesystem::path> tables;
    std::filesystem::path manifest;
    double wall_time_s = 0.0;
};

class UnknownScenario : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& scenario_ids();

/// Runs a named scenario (fig1, fig2, fits, oracle-check, weihs-compare),
/// writing its CSV tables and a manifest into `out_dir`. Tables depend only
/// on the scenario and overrides. Throws UnknownScenario listing valid ids.
ScenarioOutput run_scenario(const std::string& id, const ScenarioOverrides& overrides,
                            const std::filesystem::path& out_dir);

}  // namespace eprb

#endif  // EPRB_SCENARIOS_H_
