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

#include "eprb/oracles.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace eprb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInnerTol = 1e-10;
constexpr double kOuterTol = 1e-9;
constexpr unsigned kMaxDepth = 15;

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Integral {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive Gauss-Kronrod over consecutive breakpoint intervals.
template <typename F>
Integral integrate_pieces(F&& f, std::vector<double> cuts, double tol) {
    std::sort(cuts.begin(), cuts.end());
    Integral total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] <= 0.0) continue;
        double err = 0.0;
        total.value += Rule::integrate(f, cuts[i], cuts[i + 1], kMaxDepth, tol, &err);
        total.error += err;
    }
    return total;
}

}  // namespace

double quantum_E(const Setting& a1, const Setting& a2) { return -dot(a1.direction(), a2.direction()); }

double raw_sign_E(double theta) { return -(1.0 - 2.0 * theta / kPi); }

GammaLimit gamma_limit(double theta, double d) {
    if (!(theta >= 0.0 && theta <= kPi)) throw std::invalid_argument("gamma_limit: theta outside [0, pi]");
    if (!(d >= 0.0)) throw std::invalid_argument("gamma_limit: d must be non-negative");

    GammaLimit out;
    const double st = std::sin(theta);
    if (theta == 0.0 || theta == kPi || st == 0.0) {
        // Integrand (1 - u^2)^(-d/2): integrable iff d < 2.
        if (d >= 2.0) {
            out.divergent = true;
            return out;
        }
        out.value = std::sqrt(kPi) * std::tgamma(1.0 - 0.5 * d) / (2.0 * std::tgamma(1.5 - 0.5 * d));
        return out;
    }

    // a1 = z, a2 = (sin theta, 0, cos theta), s = (sin b cos phi, ., cos b).
    // 1 / max(r1, r2) = (1 - min(c1^2, c2^2))^(-d/2) with c1 = cos b and
    // c2 = cos b cos theta + sin b sin theta cos phi. The sphere average is
    // (1/2) int_0^pi sin b db (1/pi) int_0^pi dphi.
    const double ct = std::cos(theta);
    const double half_d = 0.5 * d;
    double inner_error = 0.0;

    auto inner = [&](double beta) {
        const double u = std::cos(beta);
        const double rho = std::sin(beta);
        auto f = [&](double phi) {
            const double c2 = u * ct + rho * st * std::cos(phi);
            const double m = std::min(u * u, c2 * c2);
            return std::pow(std::max(1.0 - m, 1e-300), -half_d);
        };
        // Kinks where c2 = +-c1.
        std::vector<double> cuts{0.0, kPi};
        if (rho > 0.0) {
            for (double sign : {1.0, -1.0}) {
                const double cphi = (sign * u - u * ct) / (rho * st);
                if (cphi > -1.0 && cphi < 1.0) cuts.push_back(std::acos(cphi));
            }
        }
        const Integral r = integrate_pieces(f, cuts, kInnerTol);
        inner_error = std::max(inner_error, r.error / kPi);
        return rho * r.value / kPi;
    };

    // The inner kinks appear or vanish where cphi = +-1, i.e. where s lies in
    // the plane of the settings on a bisector of a1 and +-a2.
    std::vector<double> outer_cuts{0.0, kPi};
    for (double half : {0.5 * theta, 0.5 * (kPi - theta)}) {
        for (double beta : {half, kPi - half}) {
            if (beta > 0.0 && beta < kPi) outer_cuts.push_back(beta);
        }
    }
    const Integral outer = integrate_pieces(inner, outer_cuts, kOuterTol);
    const double value = 0.5 * outer.value;
    const double error = 0.5 * outer.error + inner_error;
    if (!std::isfinite(value) || error > 1e-6 * std::max(1.0, std::abs(value))) {
        throw QuadratureError("gamma_limit: quadrature did not converge at theta = " +
                              std::to_string(theta) + ", d = " + std::to_string(d));
    }
    out.value = value;
    out.error_estimate = error;
    return out;
}

LimitCurve gamma_limit_curve(const ThetaGrid& grid, double d) {
    LimitCurve c;
    for (double t : grid.points()) {
        const GammaLimit g = gamma_limit(t, d);
        c.theta_grid.push_back(t);
        c.values.push_back(g.value);
        if (g.divergent) c.diverges_at.push_back(t);
    }
    return c;
}

QuantumSmax smax_quantum() {
    return {2.0 * std::numbers::sqrt2, PlanarQuad{0.0, kPi / 2.0, kPi / 4.0, 3.0 * kPi / 4.0}};
}

}  // namespace eprb
