// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>

#include "mcfuse/track.hpp"

namespace mcfuse {

enum class FeatureStrategy { None, SimpleAveraging, PositionDirectionAware };

const char* to_string(FeatureStrategy s);
FeatureStrategy parse_feature_strategy(const std::string& text);

struct SimilarityParams {
    double sigma_p = 500.0;      ///< position weight scale, image px
    double d_max = 540.0;        ///< pair exclusion radius, image px
    int m_min_pairs = 8;         ///< pairs needed before the fallback is skipped
    double top_fraction = 0.75;  ///< share of the selected pairs that is averaged

    void validate() const;
};

/// Cosine similarity; 0 when either vector is (numerically) zero.
double cosine(const FeatureVec& f, const FeatureVec& g);
double cosine(const Eigen::Vector2d& u, const Eigen::Vector2d& v);

/// L2-normalized mean; the zero vector if the mean cancels out.
FeatureVec mean_feature(std::span<const FeatureVec> features);

/// Mean feature over every detection that carries one. Throws EmptyTrack if
/// none do.
FeatureVec mean_feature(std::span<const Detection> track);

/// Weight of a detection pair, or nullopt when its bbox centers are farther
/// apart than d_max. Missing or zero movement vectors give a neutral 0.5
/// direction weight.
std::optional<double> pair_weight(const Detection& p, const Detection& q, const SimilarityParams& params);

/// Number of pairs that get averaged once m pairs have been selected.
int top_count(int m, double top_fraction);

/// Similarity restricted to detection pairs that are close in image position
/// and movement direction. Falls back to the cosine of mean features when
/// fewer than m_min_pairs pairs survive the distance cut.
double pd_similarity(std::span<const Detection> a, std::span<const Detection> b, const SimilarityParams& params);

/// Same as pd_similarity but also reports whether the fallback was taken.
double pd_similarity(std::span<const Detection> a, std::span<const Detection> b, const SimilarityParams& params,
                     bool& used_fallback);

/// Absent for strategy None or when either track carries no features.
std::optional<double> track_similarity(std::span<const Detection> a, std::span<const Detection> b,
                                       FeatureStrategy strategy, const SimilarityParams& params);

/// Returns f / |f|, or f unchanged if its norm is below 1e-12.
FeatureVec l2_normalized(const FeatureVec& f);

}  // namespace mcfuse
