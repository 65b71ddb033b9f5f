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

#ifndef EPRB_ORACLES_H_
#define EPRB_ORACLES_H_

#include <optional>
#include <stdexcept>
#include <vector>

#include "eprb/geometry.h"
#include "eprb/inequalities.h"

namespace eprb {

/// Singlet two-particle correlation -a1 . a2.
double quantum_E(const Setting& a1, const Setting& a2);

/// Correlation of sign(s.a1) sign(-s.a2) for s uniform on the sphere,
/// i.e. the model with post-selection switched off: -(1 - 2 theta / pi).
double raw_sign_E(double theta);

class QuadratureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct GammaLimit {
    std::optional<double> value;  // absent iff divergent
    bool divergent = false;
    double error_estimate = 0.0;
};

/// Small-window limit of Gamma * T0 / W for the same-bin window: the sphere
/// average of 1 / max(r1, r2), r_i = (1 - (s.a_i)^2)^(d/2), at separation
/// theta. At theta in {0, pi} both factors vanish together at the poles; the
/// limit is finite only for d < 2 and is then evaluated in closed form.
/// Throws QuadratureError if the adaptive rule misses its tolerance.
GammaLimit gamma_limit(double theta, double d);

struct LimitCurve {
    std::vector<double> theta_grid;
    std::vector<std::optional<double>> values;
    std::vector<double> diverges_at;
};

LimitCurve gamma_limit_curve(const ThetaGrid& grid, double d);

struct QuantumSmax {
    double value;
    PlanarQuad quad;
};

/// 2 sqrt 2 with its maximizing planar quadruple (0, pi/2, pi/4, 3pi/4).
QuantumSmax smax_quantum();

}  // namespace eprb

#endif  // EPRB_ORACLES_H_
