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

#ifndef EPRB_TTAG_H_
#define EPRB_TTAG_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eprb/coincidence.h"
#include "eprb/model.h"

namespace eprb {

// TTAG-CSV v1: one file per station.
//
//   # ttag-csv 1
//   k,setting_index,x
//   ...
//
// ASCII, LF line endings, k non-decreasing, x in {1,-1}. The first line is
// the version header; every following line is one record.

inline constexpr int kTtagVersion = 1;

void write_events(std::ostream& out, std::span<const TimeTag> events);
void write_events(const std::filesystem::path& path, std::span<const TimeTag> events);

/// Throws ParseError naming the line for a bad header, a version other than
/// 1, a malformed record or a decreasing tag.
std::vector<TimeTag> read_events(std::istream& in, const std::string& source);
std::vector<TimeTag> read_events(const std::filesystem::path& path);

struct StationStreams {
    std::vector<TimeTag> a;
    std::vector<TimeTag> b;
};

/// Spacing between consecutive trial start times in exported streams:
/// 2 * max_tag + w_bins + 1. Events from different trials are then more than
/// a window apart, and each event's nearest neighbour in the other stream
/// belongs to its own trial.
std::uint64_t export_period(const SimParams& p);

/// Converts records to absolute-tag streams: tag = index * period + k.
/// Appends to `out`; `trials` must be in increasing index order and later
/// calls must use larger indices.
void export_trials(std::span<const TrialRecord> trials, std::uint32_t setting_a,
                   std::uint32_t setting_b, const SimParams& p, StationStreams& out);

}  // namespace eprb

#endif  // EPRB_TTAG_H_
