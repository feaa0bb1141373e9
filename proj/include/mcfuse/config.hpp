// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mcfuse/fusion.hpp"
#include "mcfuse/metrics.hpp"
#include "mcfuse/simulator.hpp"

namespace mcfuse {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ConfigError "<source>:<line>:<col>: ...".
Json parse_json(const std::string& text, const std::string& source);
Json load_json_file(const std::string& path);

FusionConfig fusion_config_from_json(const Json& j, const std::string& path = "fusion");
Json to_json(const FusionConfig& cfg);

MatchingParams matching_params_from_json(const Json& j, const std::string& path = "evaluation");
Json to_json(const MatchingParams& p);

CameraModel camera_from_json(const Json& j, const std::string& path = "camera");
Json to_json(const CameraModel& cam);
CameraRig rig_from_json(const Json& cameras, const std::string& path = "cameras");

sim::ScenarioConfig scenario_from_json(const Json& j);
Json to_json(const sim::ScenarioConfig& cfg);
sim::ScenarioConfig load_scenario_file(const std::string& path);

struct InputSpec {
    int camera_id = 0;
    std::string tracklets;
    std::string features;  ///< empty when the camera has no feature file
};

/// Everything `fuse` needs, from one self-contained file. Relative paths are
/// resolved against base_dir (the config file's directory).
struct RunConfig {
    FusionConfig fusion;
    CameraRig cameras;
    std::vector<InputSpec> inputs;
    std::string output = "fused.csv";
    std::string ground_truth;
    MatchingParams evaluation;
    double px_per_meter = 50.0;
    std::string base_dir = ".";

    std::string resolve(const std::string& p) const;
};

RunConfig run_config_from_json(const Json& j, const std::string& base_dir);
Json to_json(const RunConfig& cfg);
RunConfig load_run_config(const std::string& path);

/// Reads every input's tracklets (and features when listed).
std::vector<Tracklet> load_inputs(const RunConfig& cfg);

}  // namespace mcfuse
