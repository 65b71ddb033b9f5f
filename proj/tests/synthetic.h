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

#ifndef EPRB_TESTS_SYNTHETIC_H_
#define EPRB_TESTS_SYNTHETIC_H_

#include <cmath>
#include <cstdint>
#include <random>

#include "eprb/analyze.h"

namespace eprb::testing {

/// Two station streams whose coincidences follow singlet statistics:
/// uniform single-station outcomes and P(x1 == x2) = (1 + E) / 2 with
/// E = -cos(alpha - beta). Each emission picks a setting pair uniformly.
/// Station B misses events with probability `loss`, and every station-B
/// event lands `offset` bins after its partner.
inline StationStreams quantum_streams(const SettingsTable& settings, std::uint64_t emissions, double loss,
                                      std::uint64_t offset, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_a(0, settings.station_a.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_b(0, settings.station_b.size() - 1);
    StationStreams out;
    constexpr std::uint64_t kSpacing = 100;
    for (std::uint64_t n = 0; n < emissions; ++n) {
        const std::size_t ia = pick_a(gen);
        const std::size_t ib = pick_b(gen);
        const double e = -std::cos(settings.station_a[ia] - settings.station_b[ib]);
        const std::int8_t x1 = u(gen) < 0.5 ? 1 : -1;
        const std::int8_t x2 = u(gen) < 0.5 * (1.0 + e) ? x1 : static_cast<std::int8_t>(-x1);
        const std::uint64_t k = n * kSpacing;
        out.a.push_back({k, static_cast<std::uint32_t>(ia), x1});
        if (u(gen) >= loss) out.b.push_back({k + offset, static_cast<std::uint32_t>(ib), x2});
    }
    return out;
}

}  // namespace eprb::testing

#endif  // EPRB_TESTS_SYNTHETIC_H_
