// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "mcfuse/geometry.hpp"

namespace mcfuse {

struct LabeledPoint {
    int id = 0;
    GlobalPoint pos = GlobalPoint::Zero();
};

/// frame -> labeled points; identities are unique within a frame.
using LabeledTimeline = std::map<int, std::vector<LabeledPoint>>;

struct MatchingParams {
    /// Distance at which point similarity reaches zero, global px.
    double sim_dist_max = 260.0;
    std::vector<double> alpha_grid = default_alpha_grid();

    static std::vector<double> default_alpha_grid();
    void validate() const;
};

/// All scores on a 0-100 scale. MOTA is not clamped and can be negative.
struct EvalReport {
    double hota = 0.0;
    double idf1 = 0.0;
    double mota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
    long idtp = 0;
    long idfp = 0;
    long idfn = 0;
    long num_gt = 0;
    long num_pred = 0;
    std::vector<std::pair<double, double>> per_alpha;
};

struct ClearResult {
    double mota = 0.0;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
};

struct IdentityResult {
    double idf1 = 0.0;
    long idtp = 0;
    long idfp = 0;
    long idfn = 0;
};

struct HotaResult {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
    std::vector<std::pair<double, double>> per_alpha;
};

/// max(0, 1 - |a - b| / sim_dist_max).
double point_similarity(const GlobalPoint& a, const GlobalPoint& b, const MatchingParams& params);

/// CLEAR MOT. Per frame, ground-truth objects matched at the previous frame
/// keep their tracker if still within the gate; the rest are assigned by
/// maximum similarity.
ClearResult mota(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params);

/// Identity F1 under the best global one-to-one identity mapping.
IdentityResult idf1(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params);

/// HOTA averaged over the alpha grid.
HotaResult hota(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params);

/// All three metrics. Throws EmptyGroundTruth when gt has no points.
EvalReport evaluate(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params);

long count_points(const LabeledTimeline& t);

}  // namespace mcfuse
