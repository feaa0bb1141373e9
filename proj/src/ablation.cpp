// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/ablation.hpp"

#include <cstdio>
#include <sstream>

#include "mcfuse/errors.hpp"
#include "mcfuse/io.hpp"

namespace mcfuse {

std::vector<AblationCondition> ablation_conditions() {
    std::vector<AblationCondition> out;
    int index = 1;
    for (auto mode : {CoordinateMode::BBoxCenter, CoordinateMode::FootPosition}) {
        for (auto strategy :
             {FeatureStrategy::None, FeatureStrategy::SimpleAveraging, FeatureStrategy::PositionDirectionAware}) {
            out.push_back({index++, mode, strategy});
        }
    }
    return out;
}

AblationResult run_ablation(const sim::ScenarioConfig& scenario, const FusionConfig& fusion,
                            std::span<const std::uint64_t> seeds, const MatchingParams& matching) {
    if (seeds.empty()) throw ConfigError("ablation needs at least one seed");
    AblationResult result;
    result.seeds.assign(seeds.begin(), seeds.end());
    for (const auto& c : ablation_conditions()) result.rows.push_back({c, {}, 0, 0, 0});

    for (const auto seed : seeds) {
        sim::ScenarioConfig cfg = scenario;
        cfg.world.seed = seed;
        const sim::Scenario s = sim::simulate(cfg);
        const auto truth = s.world.truth();
        const auto rig = s.rig();
        const auto tracklets = s.tracklets();
        for (auto& row : result.rows) {
            FusionConfig f = fusion;
            f.coordinate_mode = row.condition.coordinate_mode;
            f.feature_strategy = row.condition.feature_strategy;
            const auto tracks = fuse(tracklets, rig, f);
            row.per_seed.push_back(evaluate(truth, io::to_timeline(tracks), matching));
        }
    }

    const double n = static_cast<double>(seeds.size());
    for (auto& row : result.rows) {
        for (const auto& r : row.per_seed) {
            row.hota += r.hota;
            row.idf1 += r.idf1;
            row.mota += r.mota;
        }
        row.hota /= n;
        row.idf1 /= n;
        row.mota /= n;
    }
    return result;
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string ablation_csv(const AblationResult& result, const RunManifest& manifest) {
    std::ostringstream out;
    for (const auto& line : manifest.comment_lines()) out << line << '\n';
    out << "condition,coordinate_mode,feature_strategy,seed,metric,value\n";
    for (const auto& row : result.rows) {
        const std::string prefix = std::to_string(row.condition.index) + "," +
                                   to_string(row.condition.coordinate_mode) + "," +
                                   to_string(row.condition.feature_strategy) + ",";
        for (std::size_t i = 0; i < result.seeds.size(); ++i) {
            const auto& r = row.per_seed[i];
            const std::string p = prefix + std::to_string(result.seeds[i]) + ",";
            out << p << "HOTA," << fixed(r.hota, 6) << '\n';
            out << p << "IDF1," << fixed(r.idf1, 6) << '\n';
            out << p << "MOTA," << fixed(r.mota, 6) << '\n';
        }
        out << prefix << "mean,HOTA," << fixed(row.hota, 6) << '\n';
        out << prefix << "mean,IDF1," << fixed(row.idf1, 6) << '\n';
        out << prefix << "mean,MOTA," << fixed(row.mota, 6) << '\n';
    }
    return out.str();
}

std::string ablation_table(const AblationResult& result, const RunManifest& manifest) {
    std::ostringstream out;
    for (const auto& line : manifest.comment_lines()) out << line << '\n';
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-4s %-12s %-9s %8s %8s %8s\n", "row", "coordinates", "features", "HOTA",
                  "IDF1", "MOTA");
    out << buf;
    for (const auto& row : result.rows) {
        std::snprintf(buf, sizeof buf, "(%d)  %-12s %-9s %8.1f %8.1f %8.1f\n", row.condition.index,
                      to_string(row.condition.coordinate_mode), to_string(row.condition.feature_strategy), row.hota,
                      row.idf1, row.mota);
        out << buf;
    }
    out << "mean over " << result.seeds.size() << " seed(s)\n";
    return out.str();
}

}  // namespace mcfuse
