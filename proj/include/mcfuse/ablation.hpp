// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcfuse/fusion.hpp"
#include "mcfuse/manifest.hpp"
#include "mcfuse/metrics.hpp"
#include "mcfuse/simulator.hpp"

namespace mcfuse {

struct AblationCondition {
    int index = 0;  ///< 1-based row number
    CoordinateMode coordinate_mode = CoordinateMode::BBoxCenter;
    FeatureStrategy feature_strategy = FeatureStrategy::None;
};

/// Center/none, center/mean, center/pd-aware, then the same three with foot anchors.
std::vector<AblationCondition> ablation_conditions();

struct AblationRow {
    AblationCondition condition;
    std::vector<EvalReport> per_seed;  ///< same order as AblationResult::seeds
    double hota = 0.0;
    double idf1 = 0.0;
    double mota = 0.0;
};

struct AblationResult {
    std::vector<std::uint64_t> seeds;
    std::vector<AblationRow> rows;
};

/// Simulates one scenario per seed (the seed replaces world.seed) and runs
/// fuse + evaluate for every condition on the same observations.
AblationResult run_ablation(const sim::ScenarioConfig& scenario, const FusionConfig& fusion,
                            std::span<const std::uint64_t> seeds, const MatchingParams& matching = {});

/// Long format: condition,coordinate_mode,feature_strategy,seed,metric,value.
/// Seed "mean" rows carry the averages.
std::string ablation_csv(const AblationResult& result, const RunManifest& manifest);
std::string ablation_table(const AblationResult& result, const RunManifest& manifest);

}  // namespace mcfuse
