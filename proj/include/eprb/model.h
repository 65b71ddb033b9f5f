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

#ifndef EPRB_MODEL_H_
#define EPRB_MODEL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "eprb/geometry.h"
#include "eprb/rng.h"

namespace eprb {

/// The four model parameters plus the master seed. Validated on construction
/// and immutable afterwards; use the with_* helpers to derive variants.
class SimParams {
  public:
    /// Throws std::invalid_argument unless w_bins >= 1, t0_ratio > 0,
    /// d >= 0 and n_trials >= 1.
    SimParams(std::int64_t w_bins, double t0_ratio, double d, std::uint64_t n_trials,
              std::uint64_t seed);

    /// Coincidence window W in units of the tag resolution.
    std::int64_t w_bins() const { return w_bins_; }
    /// Maximum delay T0 in units of the tag resolution.
    double t0_ratio() const { return t0_ratio_; }
    /// Time-tag exponent.
    double d() const { return d_; }
    std::uint64_t n_trials() const { return n_trials_; }
    std::uint64_t seed() const { return seed_; }

    /// Largest tag a station can emit.
    std::int64_t max_tag() const;
    /// True when every trial is coincident regardless of tags.
    bool window_disabled() const { return w_bins_ > max_tag(); }

    SimParams with_w_bins(std::int64_t w) const;
    SimParams with_t0_ratio(double t0) const;
    SimParams with_d(double d) const;
    SimParams with_n_trials(std::uint64_t n) const;
    SimParams with_seed(std::uint64_t seed) const;
    /// Window wide enough that post-selection is inactive.
    SimParams without_window() const { return with_w_bins(max_tag() + 1); }

    friend bool operator==(const SimParams&, const SimParams&) = default;

  private:
    std::int64_t w_bins_;
    double t0_ratio_;
    double d_;
    std::uint64_t n_trials_;
    std::uint64_t seed_;
};

/// Per-trial source variables. Particle 2 carries -s.
struct HiddenPair {
    Vec3 s;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

struct StationEvent {
    std::int8_t x = 1;   // outcome, +1 or -1
    std::int64_t k = 0;  // time-tag bin
    friend bool operator==(const StationEvent&, const StationEvent&) = default;
};

struct TrialRecord {
    std::uint64_t index = 0;
    std::optional<HiddenPair> hidden;  // populated only when requested
    StationEvent ev1;
    StationEvent ev2;
};

/// Draws one hidden pair. Consumes exactly four uniforms, in order:
/// s_z = 2u - 1, azimuth = 2 pi u, lambda1, lambda2.
HiddenPair sample_hidden(TrialStream& stream);

/// (1 - c^2)^(d/2) where c is the projection of the spin on the setting.
/// Integer exponents avoid pow() so tags stay reproducible across libm
/// implementations.
inline double delay_factor(double c, double d) {
    const double q = std::max(0.0, 1.0 - c * c);
    if (d == std::floor(d) && d <= 64.0) {
        const int n = static_cast<int>(d);
        double r = (n & 1) ? std::sqrt(q) : 1.0;
        for (int i = 0; i < n / 2; ++i) r *= q;
        return r;
    }
    return std::pow(q, 0.5 * d);
}

/// Outcome and tag from the projection c = a . s_local. `scaled_lambda` is
/// lambda * t0_ratio.
inline StationEvent station_from_projection(double c, double scaled_lambda, double d) {
    StationEvent ev;
    ev.x = c >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
    ev.k = static_cast<std::int64_t>(std::floor(scaled_lambda * delay_factor(c, d)));
    return ev;
}

/// One station's response. Reads only its own arguments.
inline StationEvent station(const Setting& a, Vec3 s_local, double lambda, const SimParams& p) {
    return station_from_projection(dot(a.direction(), s_local), lambda * p.t0_ratio(), p.d());
}

/// Visits trials [begin, end) of the run in index order.
template <typename F>
void for_each_trial(const Setting& a1, const Setting& a2, const SimParams& p,
                    std::uint64_t begin, std::uint64_t end, F&& visit) {
    for (std::uint64_t n = begin; n < end; ++n) {
        TrialStream stream = rng_stream(p.seed(), n);
        const HiddenPair h = sample_hidden(stream);
        const StationEvent ev1 = station(a1, h.s, h.lambda1, p);
        const StationEvent ev2 = station(a2, -h.s, h.lambda2, p);
        visit(n, h, ev1, ev2);
    }
}

/// Materializes all n_trials records. Throws std::length_error /
/// std::bad_alloc if the run does not fit in memory.
std::vector<TrialRecord> run_pairs(const Setting& a1, const Setting& a2, const SimParams& p,
                                   bool keep_hidden = false);

}  // namespace eprb

#endif  // EPRB_MODEL_H_
