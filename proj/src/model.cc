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

#include "eprb/model.h"

#include <numbers>
#include <stdexcept>
#include <string>

namespace eprb {

SimParams::SimParams(std::int64_t w_bins, double t0_ratio, double d, std::uint64_t n_trials,
                     std::uint64_t seed)
    : w_bins_(w_bins), t0_ratio_(t0_ratio), d_(d), n_trials_(n_trials), seed_(seed) {
    if (w_bins < 1) {
        throw std::invalid_argument("w_bins must be >= 1, got " + std::to_string(w_bins));
    }
    if (!(t0_ratio > 0.0) || !std::isfinite(t0_ratio)) {
        throw std::invalid_argument("t0_ratio must be positive and finite");
    }
    if (!(d >= 0.0) || !std::isfinite(d)) {
        throw std::invalid_argument("d must be non-negative and finite");
    }
    if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
}

std::int64_t SimParams::max_tag() const {
    return static_cast<std::int64_t>(std::floor(t0_ratio_));
}

SimParams SimParams::with_w_bins(std::int64_t w) const {
    return SimParams(w, t0_ratio_, d_, n_trials_, seed_);
}
SimParams SimParams::with_t0_ratio(double t0) const {
    return SimParams(w_bins_, t0, d_, n_trials_, seed_);
}
SimParams SimParams::with_d(double d) const {
    return SimParams(w_bins_, t0_ratio_, d, n_trials_, seed_);
}
SimParams SimParams::with_n_trials(std::uint64_t n) const {
    return SimParams(w_bins_, t0_ratio_, d_, n, seed_);
}
SimParams SimParams::with_seed(std::uint64_t seed) const {
    return SimParams(w_bins_, t0_ratio_, d_, n_trials_, seed);
}

HiddenPair sample_hidden(TrialStream& stream) {
    const double z = 2.0 * stream.uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * stream.uniform();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    HiddenPair h;
    h.s = Vec3{rho * std::cos(phi), rho * std::sin(phi), z};
    h.lambda1 = stream.uniform();
    h.lambda2 = stream.uniform();
    return h;
}

std::vector<TrialRecord> run_pairs(const Setting& a1, const Setting& a2, const SimParams& p,
                                   bool keep_hidden) {
    std::vector<TrialRecord> out;
    out.reserve(p.n_trials());
    for_each_trial(a1, a2, p, 0, p.n_trials(),
                   [&](std::uint64_t n, const HiddenPair& h, StationEvent ev1, StationEvent ev2) {
                       TrialRecord& r = out.emplace_back();
                       r.index = n;
                       if (keep_hidden) r.hidden = h;
                       r.ev1 = ev1;
                       r.ev2 = ev2;
                   });
    return out;
}

}  // namespace eprb
