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

#ifndef EPRB_GEOMETRY_H_
#define EPRB_GEOMETRY_H_

#include <cmath>
#include <iosfwd>

namespace eprb {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

std::ostream& operator<<(std::ostream& os, Vec3 v);

/// Detector orientation. Always a unit vector; normalized on construction.
class Setting {
  public:
    /// Throws std::invalid_argument for zero-length or non-finite input.
    explicit Setting(Vec3 direction);

    /// Unit vector in the xz-plane at `angle` radians from +z towards +x.
    /// All planar searches and sweeps use this parameterization.
    static Setting planar(double angle);
    static Setting z_axis() { return planar(0.0); }

    Vec3 direction() const { return a_; }
    friend bool operator==(const Setting&, const Setting&) = default;

  private:
    Vec3 a_;
};

/// Angle between two settings in [0, pi].
double angle_between(const Setting& a1, const Setting& a2);

}  // namespace eprb

#endif  // EPRB_GEOMETRY_H_
