// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mcfuse {

inline constexpr const char* kVersion = "0.3.0";

/// Provenance block written into every output file. Contains nothing that
/// varies between identical invocations.
struct RunManifest {
    std::string command;
    std::string config_path;
    std::string config_hash;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string coordinate_mode;
    std::string feature_strategy;
    std::vector<std::uint64_t> seeds;
    std::string version = kVersion;

    /// Ordered key/value view used by every serializer.
    std::vector<std::pair<std::string, std::string>> fields() const;
    /// "# key=value" lines for CSV / text outputs.
    std::vector<std::string> comment_lines() const;
    std::string to_text() const;
};

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Hash of a file's contents; empty string if the file cannot be read.
std::string hash_file(const std::string& path);

}  // namespace mcfuse
