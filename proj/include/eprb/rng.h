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

#ifndef EPRB_RNG_H_
#define EPRB_RNG_H_

#include <cstdint>
#include <limits>

namespace eprb {

/// SplitMix64 output finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-trial random stream.
///
/// The starting state is mix64(mix64(seed) ^ trial_index), so it is a pure
/// function of (seed, trial_index) and distinct trial indices start from
/// distinct states. Successive outputs follow the SplitMix64 Weyl sequence.
/// Satisfies UniformRandomBitGenerator so it can drive <random> if needed,
/// but the simulator only uses `uniform()` to keep results library-independent.
class TrialStream {
  public:
    using result_type = std::uint64_t;

    TrialStream(std::uint64_t seed, std::uint64_t trial_index)
        : state_(mix64(mix64(seed) ^ trial_index)) {}

    std::uint64_t next() {
        state_ += kWeyl;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    result_type operator()() { return next(); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  private:
    static constexpr std::uint64_t kWeyl = 0x9e3779b97f4a7c15ULL;
    std::uint64_t state_;
};

TrialStream rng_stream(std::uint64_t seed, std::uint64_t trial_index);

}  // namespace eprb

#endif  // EPRB_RNG_H_
