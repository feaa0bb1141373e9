// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mcfuse/config.hpp"
#include "mcfuse/manifest.hpp"
#include "mcfuse/simulator.hpp"

namespace mcfuse {

/// Writes ground_truth.csv, cam_<id>_tracklets.csv, cam_<id>_features.{csv,bin}
/// (only when features are enabled) and run.json into out_dir. Returns the
/// written paths in write order.
std::vector<std::string> export_scenario(const sim::Scenario& scenario, const sim::ScenarioConfig& cfg,
                                         const FusionConfig& fusion, const std::string& out_dir,
                                         const RunManifest& manifest);

Json to_json(const RunManifest& manifest);

/// Writes `contents` to `path` via a temporary sibling and a rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace mcfuse
