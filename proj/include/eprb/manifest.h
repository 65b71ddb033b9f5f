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

#ifndef EPRB_MANIFEST_H_
#define EPRB_MANIFEST_H_

#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eprb {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// Flat `key = value` lines. `#` starts a comment line; blank lines are
/// ignored; there is no nesting or quoting. Keys may repeat (callers decide).
std::vector<KeyValue> parse_key_values(std::istream& in, const std::string& source);
std::vector<KeyValue> read_key_value_file(const std::filesystem::path& path);

/// Version string baked in at configure time (git describe when available).
std::string tool_version();

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
    std::string scenario;
    std::string tool_version;
    std::string created_at;  // UTC, ISO 8601
    double wall_time_s = 0.0;
    std::vector<std::pair<std::string, std::string>> params;  // in write order
    std::map<std::string, std::string> digests;               // file name -> sha256 hex
};

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

/// Names of tables in `dir` whose digest differs from the manifest (or that
/// are missing).
std::vector<std::string> verify_digests(const RunManifest& m, const std::filesystem::path& dir);

}  // namespace eprb

#endif  // EPRB_MANIFEST_H_
