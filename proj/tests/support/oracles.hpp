// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

// Slow reference implementations used to cross-check the library. None of
// these call into the code under test beyond plain data types.

#pragma once

#include <span>
#include <vector>

#include "mcfuse/appearance.hpp"
#include "mcfuse/metrics.hpp"
#include "mcfuse/track.hpp"

namespace mcfuse::oracle {

/// Exit point of the ray from the box center toward `target`, by the slab method.
Pixel slab_exit(const BBox& box, const Pixel& target);

struct ClearCounts {
    double mota = 0.0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
};

/// CLEAR walk that enumerates every partial matching in every frame.
ClearCounts clear_by_enumeration(const LabeledTimeline& gt, const LabeledTimeline& pred,
                                 const MatchingParams& params);

/// IDF1 from enumerating every partial injective map of GT ids to predicted ids.
double idf1_by_enumeration(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params);

struct HotaValues {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
    std::vector<double> per_alpha;
};

/// HOTA with per-frame matchings found by enumeration.
HotaValues hota_by_enumeration(const LabeledTimeline& gt, const LabeledTimeline& pred,
                               const MatchingParams& params);

/// Position/direction-aware similarity by sorting every detection pair.
double pd_by_enumeration(std::span<const Detection> a, std::span<const Detection> b,
                         const SimilarityParams& params, bool& used_fallback);

/// Minimum-cost assignment over all permutations (rows <= cols).
double min_assignment_cost(const Eigen::MatrixXd& cost);

}  // namespace mcfuse::oracle
