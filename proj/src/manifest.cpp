// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mcfuse {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ';';
        out += items[i];
    }
    return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunManifest::fields() const {
    std::string seed_text;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (i) seed_text += ',';
        seed_text += std::to_string(seeds[i]);
    }
    return {
        {"tool", std::string("mcfuse ") + version},
        {"command", command},
        {"config", config_path},
        {"config_hash", config_hash},
        {"inputs", join(inputs)},
        {"outputs", join(outputs)},
        {"coordinate_mode", coordinate_mode},
        {"feature_strategy", feature_strategy},
        {"seeds", seed_text},
    };
}

std::vector<std::string> RunManifest::comment_lines() const {
    std::vector<std::string> lines;
    for (const auto& [k, v] : fields()) lines.push_back("# " + k + "=" + v);
    return lines;
}

std::string RunManifest::to_text() const {
    std::string out;
    for (const auto& [k, v] : fields()) out += k + "=" + v + "\n";
    return out;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

}  // namespace mcfuse
