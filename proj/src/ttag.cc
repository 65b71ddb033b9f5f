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

#include "eprb/ttag.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "eprb/manifest.h"

namespace eprb {

namespace {

constexpr std::string_view kHeaderPrefix = "# ttag-csv ";

template <typename T>
bool parse_int(std::string_view s, T& v) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

void write_events(std::ostream& out, std::span<const TimeTag> events) {
    out << kHeaderPrefix << kTtagVersion << '\n';
    for (const auto& e : events) {
        out << e.k << ',' << e.setting_index << ',' << (e.x > 0 ? "1" : "-1") << '\n';
    }
}

void write_events(const std::filesystem::path& path, std::span<const TimeTag> events) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_events(f, events);
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<TimeTag> read_events(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source, 1, "missing '# ttag-csv' header");
    if (!std::string_view(line).starts_with(kHeaderPrefix)) {
        throw ParseError(source, 1, "missing '# ttag-csv' header");
    }
    int version = 0;
    if (!parse_int(std::string_view(line).substr(kHeaderPrefix.size()), version)) {
        throw ParseError(source, 1, "malformed version in header");
    }
    if (version != kTtagVersion) {
        throw ParseError(source, 1, "unsupported ttag-csv version " + std::to_string(version) +
                                        " (expected " + std::to_string(kTtagVersion) + ")");
    }

    std::vector<TimeTag> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view s(line);
        const auto c1 = s.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
        if (c2 == std::string_view::npos || s.find(',', c2 + 1) != std::string_view::npos) {
            throw ParseError(source, lineno, "expected 'k,setting_index,x'");
        }
        TimeTag t;
        int x = 0;
        if (!parse_int(s.substr(0, c1), t.k) || !parse_int(s.substr(c1 + 1, c2 - c1 - 1), t.setting_index) ||
            !parse_int(s.substr(c2 + 1), x) || (x != 1 && x != -1)) {
            throw ParseError(source, lineno, "malformed record '" + line + "'");
        }
        t.x = static_cast<std::int8_t>(x);
        if (!out.empty() && t.k < out.back().k) {
            throw ParseError(source, lineno, "tag " + std::to_string(t.k) + " is smaller than the previous tag");
        }
        out.push_back(t);
    }
    return out;
}

std::vector<TimeTag> read_events(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    return read_events(f, path.string());
}

std::uint64_t export_period(const SimParams& p) {
    return 2 * static_cast<std::uint64_t>(p.max_tag()) + static_cast<std::uint64_t>(p.w_bins()) + 1;
}

void export_trials(std::span<const TrialRecord> trials, std::uint32_t setting_a,
                   std::uint32_t setting_b, const SimParams& p, StationStreams& out) {
    const std::uint64_t period = export_period(p);
    // Within one trial the two stations are independent streams, so each is
    // appended in index order and stays sorted.
    for (const auto& t : trials) {
        const std::uint64_t base = t.index * period;
        out.a.push_back({base + static_cast<std::uint64_t>(t.ev1.k), setting_a, t.ev1.x});
        out.b.push_back({base + static_cast<std::uint64_t>(t.ev2.k), setting_b, t.ev2.x});
    }
}

}  // namespace eprb
