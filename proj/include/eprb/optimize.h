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

#ifndef EPRB_OPTIMIZE_H_
#define EPRB_OPTIMIZE_H_

#include <cmath>

namespace eprb {

struct ScalarOptimum {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
};

/// Golden-section search for a minimum of f on [lo, hi], stopping when the
/// bracket is narrower than `tol`. Returns the best point evaluated.
template <typename F>
ScalarOptimum golden_section_min(F&& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498948482;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    ScalarOptimum best{x1, f1, 2};
    if (f2 < best.fx) best = {x2, f2, 2};
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
            if (f1 < best.fx) best = {x1, f1, best.evaluations};
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
            if (f2 < best.fx) best = {x2, f2, best.evaluations};
        }
        ++best.evaluations;
    }
    return best;
}

template <typename F>
ScalarOptimum golden_section_max(F&& f, double lo, double hi, double tol) {
    ScalarOptimum r = golden_section_min([&](double x) { return -f(x); }, lo, hi, tol);
    r.fx = -r.fx;
    return r;
}

}  // namespace eprb

#endif  // EPRB_OPTIMIZE_H_
