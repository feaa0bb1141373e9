// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mcfuse {

const char* to_string(FeatureStrategy s) {
    switch (s) {
        case FeatureStrategy::None:
            return "none";
        case FeatureStrategy::SimpleAveraging:
            return "mean";
        case FeatureStrategy::PositionDirectionAware:
            return "pd-aware";
    }
    return "none";
}

FeatureStrategy parse_feature_strategy(const std::string& text) {
    if (text == "none") return FeatureStrategy::None;
    if (text == "mean" || text == "simple-averaging" || text == "simple_averaging") {
        return FeatureStrategy::SimpleAveraging;
    }
    if (text == "pd-aware" || text == "pd_aware" || text == "position-direction-aware") {
        return FeatureStrategy::PositionDirectionAware;
    }
    throw ConfigError("unknown feature strategy '" + text + "' (expected none|mean|pd-aware)");
}

void SimilarityParams::validate() const {
    if (!(sigma_p > 0)) throw ConfigError("similarity.sigma_p must be > 0");
    if (!(d_max > 0)) throw ConfigError("similarity.d_max must be > 0");
    if (m_min_pairs < 1) throw ConfigError("similarity.m_min_pairs must be >= 1");
    if (!(top_fraction > 0 && top_fraction <= 1)) throw ConfigError("similarity.top_fraction must be in (0, 1]");
}

double cosine(const FeatureVec& f, const FeatureVec& g) {
    if (f.size() != g.size()) {
        throw DimensionMismatch("feature dimensions differ: " + std::to_string(f.size()) + " vs " +
                                std::to_string(g.size()));
    }
    const Eigen::VectorXd a = f.cast<double>();
    const Eigen::VectorXd b = g.cast<double>();
    const double na = a.norm();
    const double nb = b.norm();
    if (na < 1e-12 || nb < 1e-12) return 0.0;
    return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

double cosine(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu < 1e-12 || nv < 1e-12) return 0.0;
    return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

FeatureVec l2_normalized(const FeatureVec& f) {
    const double n = f.cast<double>().norm();
    if (n < 1e-12) return f;
    return (f.cast<double>() / n).cast<float>();
}

FeatureVec mean_feature(std::span<const FeatureVec> features) {
    if (features.empty()) throw EmptyTrack("mean_feature of an empty track");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(features.front().size());
    for (const auto& f : features) {
        if (f.size() != sum.size()) throw DimensionMismatch("feature dimensions differ within a track");
        sum += f.cast<double>();
    }
    sum /= static_cast<double>(features.size());
    const double n = sum.norm();
    if (n < 1e-12) return sum.cast<float>();
    return (sum / n).cast<float>();
}

FeatureVec mean_feature(std::span<const Detection> track) {
    std::vector<FeatureVec> feats;
    feats.reserve(track.size());
    for (const auto& d : track) {
        if (d.feature) feats.push_back(*d.feature);
    }
    if (feats.empty()) throw EmptyTrack("track has no appearance features");
    return mean_feature(std::span<const FeatureVec>(feats));
}

std::optional<double> pair_weight(const Detection& p, const Detection& q, const SimilarityParams& params) {
    const double d = (p.bbox.center() - q.bbox.center()).norm();
    if (d > params.d_max) return std::nullopt;
    const double w_pos = std::exp(-(d * d) / (params.sigma_p * params.sigma_p));
    double w_vel = 0.5;
    if (p.motion_px && q.motion_px) w_vel = (1.0 + cosine(*p.motion_px, *q.motion_px)) / 2.0;
    return w_pos * w_vel;
}

int top_count(int m, double top_fraction) {
    return std::max(1, static_cast<int>(std::ceil(top_fraction * m - 1e-9)));
}

namespace {

struct WeightedPair {
    double weight;
    // Canonical (smaller, larger) detection keys: tie order must not depend on
    // which track came first.
    std::tuple<int, int, int> lo, hi;
    const Detection* p;
    const Detection* q;
};

bool heavier(const WeightedPair& a, const WeightedPair& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
}

}  // namespace

double pd_similarity(std::span<const Detection> a, std::span<const Detection> b, const SimilarityParams& params,
                     bool& used_fallback) {
    std::vector<WeightedPair> pairs;
    for (const auto& p : a) {
        if (!p.feature) continue;
        for (const auto& q : b) {
            if (!q.feature) continue;
            const auto w = pair_weight(p, q, params);
            if (!w) continue;
            auto kp = p.key();
            auto kq = q.key();
            if (kq < kp) std::swap(kp, kq);
            pairs.push_back({*w, kp, kq, &p, &q});
        }
    }

    const auto m = static_cast<std::size_t>(params.m_min_pairs);
    if (pairs.size() < m) {
        used_fallback = true;
        return cosine(mean_feature(a), mean_feature(b));
    }
    used_fallback = false;

    std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(m), pairs.end(), heavier);
    std::vector<double> cosines;
    cosines.reserve(m);
    for (std::size_t i = 0; i < m; ++i) cosines.push_back(cosine(*pairs[i].p->feature, *pairs[i].q->feature));
    std::sort(cosines.begin(), cosines.end(), std::greater<>());

    const int keep = top_count(params.m_min_pairs, params.top_fraction);
    double sum = 0.0;
    for (int i = 0; i < keep; ++i) sum += cosines[static_cast<std::size_t>(i)];
    return sum / keep;
}

double pd_similarity(std::span<const Detection> a, std::span<const Detection> b, const SimilarityParams& params) {
    bool fallback = false;
    return pd_similarity(a, b, params, fallback);
}

std::optional<double> track_similarity(std::span<const Detection> a, std::span<const Detection> b,
                                       FeatureStrategy strategy, const SimilarityParams& params) {
    const auto has_feature = [](const Detection& d) { return d.feature.has_value(); };
    if (strategy != FeatureStrategy::None &&
        (std::none_of(a.begin(), a.end(), has_feature) || std::none_of(b.begin(), b.end(), has_feature))) {
        return std::nullopt;
    }
    switch (strategy) {
        case FeatureStrategy::None:
            return std::nullopt;
        case FeatureStrategy::SimpleAveraging:
            return cosine(mean_feature(a), mean_feature(b));
        case FeatureStrategy::PositionDirectionAware:
            return pd_similarity(a, b, params);
    }
    return std::nullopt;
}

}  // namespace mcfuse
