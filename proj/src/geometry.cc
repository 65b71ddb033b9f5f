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

#include "eprb/geometry.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace eprb {

std::ostream& operator<<(std::ostream& os, Vec3 v) {
    return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

Setting::Setting(Vec3 direction) {
    const double n = norm(direction);
    if (!std::isfinite(n) || n == 0.0) {
        throw std::invalid_argument("Setting: direction must be a finite non-zero vector");
    }
    a_ = (1.0 / n) * direction;
}

Setting Setting::planar(double angle) {
    return Setting(Vec3{std::sin(angle), 0.0, std::cos(angle)});
}

double angle_between(const Setting& a1, const Setting& a2) {
    return std::acos(std::clamp(dot(a1.direction(), a2.direction()), -1.0, 1.0));
}

}  // namespace eprb
