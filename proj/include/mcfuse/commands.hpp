// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcfuse/fusion.hpp"
#include "mcfuse/metrics.hpp"

namespace mcfuse {

struct SimulateOptions {
    std::string config;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<CoordinateMode> coordinate_mode;
    std::optional<FeatureStrategy> feature_strategy;
};

struct FuseOptions {
    std::string config;
    std::optional<std::string> out;  ///< defaults to the config's output path
    std::optional<CoordinateMode> coordinate_mode;
    std::optional<FeatureStrategy> feature_strategy;
};

struct EvalOptions {
    std::string ground_truth;
    std::string prediction;
    std::optional<std::string> config;  ///< optional file with an "evaluation" section
    std::string out_dir = ".";
};

struct AblationOptions {
    std::string config;  ///< scenario file; optional "fusion" and "evaluation" sections
    std::vector<std::uint64_t> seeds;
    std::string out_dir = ".";
};

/// Each command writes its outputs and returns the written paths. Progress
/// and summaries go to `log`; failures throw mcfuse::Error.
std::vector<std::string> cmd_simulate(const SimulateOptions& opt, std::ostream& log);
std::vector<std::string> cmd_fuse(const FuseOptions& opt, std::ostream& log);
std::vector<std::string> cmd_eval(const EvalOptions& opt, std::ostream& log);
std::vector<std::string> cmd_ablation(const AblationOptions& opt, std::ostream& log);

/// "1,2,5" or "1-10" or a mix ("1-3,7").
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

std::string format_report(const EvalReport& report);

}  // namespace mcfuse
