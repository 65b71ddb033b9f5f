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

#include "eprb/manifest.h"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "eprb/results_csv.h"

#ifndef EPRB_VERSION
#define EPRB_VERSION "0.1.0"
#endif

namespace eprb {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

constexpr const char* kParamPrefix = "param.";
constexpr const char* kDigestPrefix = "digest.";

}  // namespace

std::vector<KeyValue> parse_key_values(std::istream& in, const std::string& source) {
    std::vector<KeyValue> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string s = trim(raw);
        if (s.empty() || s.front() == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(source, line, "expected 'key = value'");
        KeyValue kv{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
        if (kv.key.empty()) throw ParseError(source, line, "empty key");
        out.push_back(std::move(kv));
    }
    return out;
}

std::vector<KeyValue> read_key_value_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    return parse_key_values(f, path.string());
}

std::string tool_version() { return EPRB_VERSION; }

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest initialisation failed");
    }
    std::array<char, 1 << 16> buf;
    while (f) {
        f.read(buf.data(), buf.size());
        if (f.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(f.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[md[i] >> 4];
        hex += kHex[md[i] & 0xf];
    }
    return hex;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << "# eprbsim run manifest\n";
    f << "scenario = " << m.scenario << '\n';
    f << "tool_version = " << m.tool_version << '\n';
    f << "created_at = " << m.created_at << '\n';
    f << "wall_time_s = " << format_real(m.wall_time_s) << '\n';
    for (const auto& [k, v] : m.params) f << kParamPrefix << k << " = " << v << '\n';
    for (const auto& [name, hex] : m.digests) f << kDigestPrefix << name << " = sha256:" << hex << '\n';
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
    RunManifest m;
    for (const auto& kv : read_key_value_file(path)) {
        if (kv.key == "scenario") {
            m.scenario = kv.value;
        } else if (kv.key == "tool_version") {
            m.tool_version = kv.value;
        } else if (kv.key == "created_at") {
            m.created_at = kv.value;
        } else if (kv.key == "wall_time_s") {
            m.wall_time_s = parse_real(kv.value).value_or(0.0);
        } else if (kv.key.starts_with(kParamPrefix)) {
            m.params.emplace_back(kv.key.substr(std::string(kParamPrefix).size()), kv.value);
        } else if (kv.key.starts_with(kDigestPrefix)) {
            std::string hex = kv.value;
            if (!hex.starts_with("sha256:")) {
                throw ParseError(path.string(), kv.line, "digest must start with 'sha256:'");
            }
            m.digests[kv.key.substr(std::string(kDigestPrefix).size())] = hex.substr(7);
        } else {
            throw ParseError(path.string(), kv.line, "unknown manifest key '" + kv.key + "'");
        }
    }
    if (m.scenario.empty()) throw ParseError(path.string(), 0, "manifest has no scenario");
    return m;
}

std::vector<std::string> verify_digests(const RunManifest& m, const std::filesystem::path& dir) {
    std::vector<std::string> bad;
    for (const auto& [name, hex] : m.digests) {
        const auto p = dir / name;
        if (!std::filesystem::exists(p) || sha256_file(p) != hex) bad.push_back(name);
    }
    return bad;
}

}  // namespace eprb
