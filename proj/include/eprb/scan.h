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

#ifndef EPRB_SCAN_H_
#define EPRB_SCAN_H_

#include <span>
#include <vector>

#include "eprb/coincidence.h"
#include "eprb/model.h"

namespace eprb {

/// Blocked tallies for one setting pair without materializing records.
/// Identical to tally_blocked(run_pairs(a1, a2, p), p.w_bins()).
BlockedCounts simulate_counts(const Setting& a1, const Setting& a2, const SimParams& p);

/// Tallies of a1 against every setting in `a2s`, all sharing the same
/// per-trial streams. Element j equals simulate_counts(a1, a2s[j], p); the
/// hidden pair and station-1 event are computed once per trial.
std::vector<BlockedCounts> scan_settings(const Setting& a1, std::span<const Setting> a2s,
                                         const SimParams& p);

/// scan_settings with a1 = z and a2 = Setting::planar(theta).
std::vector<BlockedCounts> scan_theta(const SimParams& p, std::span<const double> thetas);

}  // namespace eprb

#endif  // EPRB_SCAN_H_
