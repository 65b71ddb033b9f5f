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

#ifndef EPRB_INEQUALITIES_H_
#define EPRB_INEQUALITIES_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

// pchip.hpp in Boost 1.74 uses unqualified isnan; fpclassify provides it.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "eprb/coincidence.h"
#include "eprb/model.h"

namespace eprb {

/// CHSH combination E(a,c) - E(a,d) + E(b,c) + E(b,d).
constexpr double s_value(double e_ac, double e_ad, double e_bc, double e_bd) {
    return e_ac - e_ad + e_bc + e_bd;
}

inline constexpr double kTrivialBound = 4.0;
inline constexpr double kChshBound = 2.0;

/// Setting angles in the xz-plane (see Setting::planar); a, b belong to
/// station 1 and c, d to station 2.
struct PlanarQuad {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

struct SettingsQuad {
    Setting a, b, c, d;
    static SettingsQuad from_planar(const PlanarQuad& q);
};

/// Angle in [0, pi] between two planar settings.
double planar_separation(double alpha, double beta);

/// Upper bound 6/gamma - 4 of the coincidence-adjusted inequality.
/// Throws std::domain_error unless 0 < gamma <= 1.
double lg_bound(double gamma);

struct ViolationFlags {
    bool chsh = false;           // |s| > 2
    bool larsson_gill = false;   // |s| > 6/gamma - 4
    bool super_quantum = false;  // |s| > 2 sqrt 2
    bool lg_vacuous = false;     // 6/gamma - 4 >= 4, so the bound cannot be exceeded
    friend bool operator==(const ViolationFlags&, const ViolationFlags&) = default;
};

/// Descriptive report of which bounds |s| exceeds. Throws
/// std::invalid_argument if |s| > 4 or gamma_inf is outside (0, 1].
ViolationFlags check_violations(double s, double gamma_inf);

/// Points in [0, pi], strictly increasing.
class ThetaGrid {
  public:
    explicit ThetaGrid(std::vector<double> points);
    /// `count` equally spaced points from 0 to pi inclusive.
    static ThetaGrid uniform(std::size_t count);

    std::span<const double> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    /// True when the grid starts at 0 and ends at pi.
    bool covers_half_turn() const;

  private:
    std::vector<double> points_;
};

/// E(theta) and Gamma(theta) sampled on a grid and interpolated by a
/// monotone piecewise-cubic Hermite interpolant.
class CorrelationCurve {
  public:
    /// Throws std::invalid_argument if any grid point has no coincidences.
    CorrelationCurve(const ThetaGrid& grid, std::span<const CorrelationEstimate> estimates);

    /// Accepts any angle; it is folded into [0, pi] first.
    double e(double theta) const;
    double gamma(double theta) const;

    std::span<const double> thetas() const { return thetas_; }
    std::span<const CorrelationEstimate> samples() const { return samples_; }

  private:
    using Interpolant = boost::math::interpolators::pchip<std::vector<double>>;
    std::vector<double> thetas_;
    std::vector<CorrelationEstimate> samples_;
    std::optional<Interpolant> e_;
    std::optional<Interpolant> gamma_;
};

struct SearchSpec {
    ThetaGrid grid = ThetaGrid::uniform(73);  // spacing pi/72
    double coarse_step = 0.0;                 // 0 selects pi/36
    double refine_tol = 1e-7;                 // coordinate golden-section tolerance (rad)
    double gamma_refine_tol = 0.0;            // 0 selects pi/720
};

struct GammaInfimum {
    double gamma = 0.0;
    double theta = 0.0;
    int refinement_runs = 0;
};

struct SReport {
    double s = 0.0;           // signed S at `quad`
    double s_max = 0.0;       // |s|
    PlanarQuad quad;
    double e_ac = 0.0, e_ad = 0.0, e_bc = 0.0, e_bd = 0.0;
    double gamma_inf = 0.0;
    double gamma_inf_theta = 0.0;
    /// Sum of Gamma over the four setting pairs of `quad`.
    double gamma_pair_sum = 0.0;
    double bound_trivial = kTrivialBound;
    double bound_chsh = kChshBound;
    std::optional<double> bound_lg;  // absent when gamma_inf == 0
    ViolationFlags flags;
    std::vector<CorrelationEstimate> samples;  // one per grid point
};

/// S_max over planar setting quadruples, using rotational invariance: E is
/// estimated once per grid angle (shared seed), interpolated, and |S| is
/// maximized on a coarse grid followed by coordinate-wise golden-section
/// refinement. gamma_inf is the grid minimum of Gamma, refined by fresh
/// simulation runs around the argmin. Throws std::invalid_argument for
/// grids with fewer than 5 points or not spanning [0, pi].
SReport maximize_S(const SimParams& p, const SearchSpec& search = {});

struct QuadOptimum {
    PlanarQuad quad;
    double s = 0.0;  // signed
};

/// Maximizes |S| over planar quadruples for any E(theta) on [0, pi].
/// Station-1 angle `a` is pinned to 0. Coarse stage: all multiples of
/// `coarse_step` for b, c, d; then cyclic golden-section passes on each
/// coordinate within one coarse step of the incumbent.
QuadOptimum maximize_quad(const std::function<double(double)>& e_of_theta, double coarse_step,
                          double refine_tol);

/// Grid minimum of Gamma followed by golden-section refinement.
GammaInfimum min_gamma(const SimParams& p, const ThetaGrid& grid, double refine_tol = 0.0);

/// Refinement shared by min_gamma and maximize_S: `gammas` are Gamma on
/// `grid` for `p`.
GammaInfimum refine_gamma_infimum(const SimParams& p, const ThetaGrid& grid,
                                  std::span<const double> gammas, double refine_tol);

}  // namespace eprb

#endif  // EPRB_INEQUALITIES_H_
