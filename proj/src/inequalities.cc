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

#include "eprb/inequalities.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eprb/optimize.h"
#include "eprb/scan.h"

namespace eprb {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

SettingsQuad SettingsQuad::from_planar(const PlanarQuad& q) {
    return {Setting::planar(q.a), Setting::planar(q.b), Setting::planar(q.c), Setting::planar(q.d)};
}

double planar_separation(double alpha, double beta) {
    double delta = std::fmod(std::abs(alpha - beta), kTwoPi);
    if (delta > kPi) delta = kTwoPi - delta;
    return delta;
}

double lg_bound(double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0) {
        throw std::domain_error("lg_bound: gamma must lie in (0, 1], got " + std::to_string(gamma));
    }
    return 6.0 / gamma - 4.0;
}

ViolationFlags check_violations(double s, double gamma_inf) {
    const double abs_s = std::abs(s);
    if (!(abs_s <= kTrivialBound)) {
        throw std::invalid_argument("check_violations: |s| exceeds the trivial bound 4");
    }
    const double bound = lg_bound(gamma_inf);
    ViolationFlags f;
    f.chsh = abs_s > kChshBound;
    f.larsson_gill = abs_s > bound;
    f.super_quantum = abs_s > 2.0 * std::numbers::sqrt2;
    f.lg_vacuous = bound >= kTrivialBound;
    return f;
}

ThetaGrid::ThetaGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("ThetaGrid: no points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!(points_[i] >= 0.0 && points_[i] <= kPi)) {
            throw std::invalid_argument("ThetaGrid: point outside [0, pi]");
        }
        if (i > 0 && !(points_[i] > points_[i - 1])) {
            throw std::invalid_argument("ThetaGrid: points must be strictly increasing");
        }
    }
}

ThetaGrid ThetaGrid::uniform(std::size_t count) {
    if (count < 2) throw std::invalid_argument("ThetaGrid::uniform: need at least 2 points");
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i) {
        pts[i] = kPi * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    pts.back() = kPi;
    return ThetaGrid(std::move(pts));
}

bool ThetaGrid::covers_half_turn() const {
    return points_.front() == 0.0 && std::abs(points_.back() - kPi) < 1e-12;
}

CorrelationCurve::CorrelationCurve(const ThetaGrid& grid,
                                   std::span<const CorrelationEstimate> estimates)
    : thetas_(grid.points().begin(), grid.points().end()),
      samples_(estimates.begin(), estimates.end()) {
    if (samples_.size() != thetas_.size()) {
        throw std::invalid_argument("CorrelationCurve: one estimate per grid point required");
    }
    if (thetas_.size() < 4) {
        throw std::invalid_argument("CorrelationCurve: need at least 4 grid points");
    }
    std::vector<double> e, g;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!samples_[i].e) {
            throw std::invalid_argument("CorrelationCurve: no coincidences at theta = " +
                                        std::to_string(thetas_[i]));
        }
        e.push_back(*samples_[i].e);
        g.push_back(samples_[i].gamma);
    }
    e_.emplace(std::vector<double>(thetas_), std::move(e));
    gamma_.emplace(std::vector<double>(thetas_), std::move(g));
}

double CorrelationCurve::e(double theta) const {
    const double t = std::clamp(planar_separation(theta, 0.0), thetas_.front(), thetas_.back());
    return (*e_)(t);
}

double CorrelationCurve::gamma(double theta) const {
    const double t = std::clamp(planar_separation(theta, 0.0), thetas_.front(), thetas_.back());
    return (*gamma_)(t);
}

QuadOptimum maximize_quad(const std::function<double(double)>& e_of_theta, double coarse_step,
                          double refine_tol) {
    const auto m = static_cast<std::size_t>(std::max(4.0, std::round(kTwoPi / coarse_step)));
    const double step = kTwoPi / static_cast<double>(m);
    std::vector<double> table(m);
    for (std::size_t k = 0; k < m; ++k) {
        table[k] = e_of_theta(planar_separation(static_cast<double>(k) * step, 0.0));
    }

    std::size_t best_b = 0, best_c = 0, best_d = 0;
    double best = -1.0;
    for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t c = 0; c < m; ++c) {
            const double e_ac = table[c];
            const double e_bc = table[(b + m - c) % m];
            for (std::size_t d = 0; d < m; ++d) {
                const double s = s_value(e_ac, table[d], e_bc, table[(b + m - d) % m]);
                if (std::abs(s) > best) {
                    best = std::abs(s);
                    best_b = b;
                    best_c = c;
                    best_d = d;
                }
            }
        }
    }

    auto s_at = [&](const PlanarQuad& q) {
        return s_value(e_of_theta(planar_separation(q.a, q.c)), e_of_theta(planar_separation(q.a, q.d)),
                       e_of_theta(planar_separation(q.b, q.c)), e_of_theta(planar_separation(q.b, q.d)));
    };

    PlanarQuad q{0.0, static_cast<double>(best_b) * step, static_cast<double>(best_c) * step,
                 static_cast<double>(best_d) * step};
    double current = std::abs(s_at(q));
    double* coords[] = {&q.b, &q.c, &q.d};
    for (int pass = 0; pass < 100; ++pass) {
        const double before = current;
        for (double* x : coords) {
            const double x0 = *x;
            const ScalarOptimum opt = golden_section_max(
                [&](double v) {
                    *x = v;
                    return std::abs(s_at(q));
                },
                x0 - step, x0 + step, refine_tol);
            if (opt.fx > current) {
                *x = opt.x;
                current = opt.fx;
            } else {
                *x = x0;
            }
        }
        if (current - before < 1e-13) break;
    }
    return {q, s_at(q)};
}

GammaInfimum refine_gamma_infimum(const SimParams& p, const ThetaGrid& grid,
                                  std::span<const double> gammas, double refine_tol) {
    if (gammas.size() != grid.size()) {
        throw std::invalid_argument("refine_gamma_infimum: one gamma per grid point required");
    }
    if (refine_tol <= 0.0) refine_tol = kPi / 720.0;
    const auto pts = grid.points();
    const auto idx = static_cast<std::size_t>(std::min_element(gammas.begin(), gammas.end()) -
                                              gammas.begin());
    GammaInfimum out{gammas[idx], pts[idx], 0};
    const double lo = pts[idx == 0 ? 0 : idx - 1];
    const double hi = pts[idx + 1 < pts.size() ? idx + 1 : idx];
    if (hi - lo <= refine_tol) return out;

    const Setting a1 = Setting::z_axis();
    const ScalarOptimum opt = golden_section_min(
        [&](double theta) { return estimate(simulate_counts(a1, Setting::planar(theta), p)).gamma; },
        lo, hi, refine_tol);
    out.refinement_runs = opt.evaluations;
    if (opt.fx < out.gamma) {
        out.gamma = opt.fx;
        out.theta = opt.x;
    }
    return out;
}

namespace {

void require_search_grid(const ThetaGrid& grid) {
    if (grid.size() < 5) {
        throw std::invalid_argument("theta grid needs at least 5 points, got " +
                                    std::to_string(grid.size()));
    }
    if (!grid.covers_half_turn()) throw std::invalid_argument("theta grid must span [0, pi]");
}

}  // namespace

GammaInfimum min_gamma(const SimParams& p, const ThetaGrid& grid, double refine_tol) {
    if (!grid.covers_half_turn()) throw std::invalid_argument("theta grid must span [0, pi]");
    const auto counts = scan_theta(p, grid.points());
    std::vector<double> gammas;
    for (const auto& c : counts) gammas.push_back(estimate(c.total()).gamma);
    return refine_gamma_infimum(p, grid, gammas, refine_tol);
}

SReport maximize_S(const SimParams& p, const SearchSpec& search) {
    require_search_grid(search.grid);
    const auto counts = scan_theta(p, search.grid.points());
    std::vector<CorrelationEstimate> estimates;
    estimates.reserve(counts.size());
    for (const auto& c : counts) estimates.push_back(estimate(c));
    const CorrelationCurve curve(search.grid, estimates);

    const double coarse = search.coarse_step > 0.0 ? search.coarse_step : kPi / 36.0;
    const QuadOptimum opt = maximize_quad([&](double t) { return curve.e(t); }, coarse, search.refine_tol);

    SReport r;
    r.quad = opt.quad;
    const PlanarQuad& q = opt.quad;
    r.e_ac = curve.e(planar_separation(q.a, q.c));
    r.e_ad = curve.e(planar_separation(q.a, q.d));
    r.e_bc = curve.e(planar_separation(q.b, q.c));
    r.e_bd = curve.e(planar_separation(q.b, q.d));
    r.s = s_value(r.e_ac, r.e_ad, r.e_bc, r.e_bd);
    r.s_max = std::abs(r.s);
    r.gamma_pair_sum = curve.gamma(planar_separation(q.a, q.c)) + curve.gamma(planar_separation(q.a, q.d)) +
                       curve.gamma(planar_separation(q.b, q.c)) + curve.gamma(planar_separation(q.b, q.d));

    std::vector<double> gammas;
    for (const auto& e : estimates) gammas.push_back(e.gamma);
    const GammaInfimum inf = refine_gamma_infimum(p, search.grid, gammas, search.gamma_refine_tol);
    r.gamma_inf = inf.gamma;
    r.gamma_inf_theta = inf.theta;
    if (r.gamma_inf > 0.0) {
        r.bound_lg = lg_bound(r.gamma_inf);
        r.flags = check_violations(r.s, r.gamma_inf);
    } else {
        r.flags.chsh = r.s_max > kChshBound;
        r.flags.super_quantum = r.s_max > 2.0 * std::numbers::sqrt2;
        r.flags.lg_vacuous = true;
    }
    r.samples = std::move(estimates);
    return r;
}

}  // namespace eprb
