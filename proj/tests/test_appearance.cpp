// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "mcfuse/appearance.hpp"
#include "oracles.hpp"

namespace mcfuse {
namespace {

FeatureVec vec(std::initializer_list<float> v) {
    FeatureVec f(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (float x : v) f[i++] = x;
    return f;
}

Detection at(const Pixel& c, std::optional<Eigen::Vector2d> motion, FeatureVec feature = vec({1, 0})) {
    Detection d;
    d.bbox = {c.x() - 10, c.y() - 20, c.x() + 10, c.y() + 20};
    d.motion_px = motion;
    d.feature = std::move(feature);
    return d;
}

TEST(Cosine, Examples) {
    EXPECT_DOUBLE_EQ(cosine(vec({1, 0, 0, 0}), vec({1, 0, 0, 0})), 1.0);
    EXPECT_DOUBLE_EQ(cosine(vec({1, 0}), vec({0, 1})), 0.0);
    // (1*2 + 2*1 + 2*2) / (3 * 3)
    EXPECT_NEAR(cosine(vec({1, 2, 2}), vec({2, 1, 2})), 8.0 / 9.0, 1e-12);
}

TEST(Cosine, ZeroVectorIsUninformative) { EXPECT_EQ(cosine(vec({0, 0}), vec({1, 1})), 0.0); }

TEST(Cosine, LengthMismatchThrows) { EXPECT_THROW(cosine(vec({1, 0}), vec({1, 0, 0})), DimensionMismatch); }

TEST(MeanFeature, SingleFeatureIsNormalized) {
    const std::vector<FeatureVec> one{vec({3, 4})};
    const FeatureVec m = mean_feature(std::span<const FeatureVec>(one));
    EXPECT_FLOAT_EQ(m[0], 0.6f);
    EXPECT_FLOAT_EQ(m[1], 0.8f);
}

TEST(MeanFeature, OppositeFeaturesCancel) {
    const std::vector<FeatureVec> two{vec({1, -2}), vec({-1, 2})};
    EXPECT_EQ(mean_feature(std::span<const FeatureVec>(two)).norm(), 0.0f);
}

TEST(MeanFeature, OrthogonalPairAverages) {
    const std::vector<FeatureVec> two{vec({1, 0}), vec({0, 1})};
    const FeatureVec m = mean_feature(std::span<const FeatureVec>(two));
    EXPECT_NEAR(m[0], 1 / std::sqrt(2.0), 1e-7);
    EXPECT_NEAR(m[1], 1 / std::sqrt(2.0), 1e-7);
}

TEST(MeanFeature, EmptyInputThrows) {
    EXPECT_THROW(mean_feature(std::span<const FeatureVec>()), EmptyTrack);
    std::vector<Detection> no_features(3);
    EXPECT_THROW(mean_feature(std::span<const Detection>(no_features)), EmptyTrack);
}

TEST(PairWeight, Examples) {
    const SimilarityParams params;
    const Eigen::Vector2d right(1, 0), up(0, 1);
    EXPECT_DOUBLE_EQ(*pair_weight(at({500, 500}, right), at({500, 500}, Eigen::Vector2d(3, 0)), params), 1.0);
    EXPECT_NEAR(*pair_weight(at({100, 500}, right), at({600, 500}, up), params), std::exp(-1.0) * 0.5, 1e-12);
    EXPECT_NEAR(*pair_weight(at({100, 500}, right), at({600, 500}, up), params), 0.18394, 1e-5);
    EXPECT_FALSE(pair_weight(at({0, 0}, right), at({600, 0}, right), params).has_value());
}

TEST(PairWeight, ExclusionRadiusIsInclusive) {
    const SimilarityParams params;
    EXPECT_TRUE(pair_weight(at({0, 0}, {}), at({540, 0}, {}), params).has_value());
    EXPECT_FALSE(pair_weight(at({0, 0}, {}), at({540.001, 0}, {}), params).has_value());
}

TEST(PairWeight, MissingMotionIsNeutral) {
    const SimilarityParams params;
    EXPECT_DOUBLE_EQ(*pair_weight(at({0, 0}, {}), at({0, 0}, Eigen::Vector2d(1, 0)), params), 0.5);
    EXPECT_DOUBLE_EQ(*pair_weight(at({0, 0}, Eigen::Vector2d::Zero()), at({0, 0}, Eigen::Vector2d(1, 0)), params),
                     0.5);
}

TEST(PairWeight, BoundedAndMonotone) {
    const SimilarityParams params;
    gen::Rng rng(21);
    for (int n = 0; n < 2000; ++n) {
        const double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const Eigen::Vector2d u(1, 0), v(std::cos(angle), std::sin(angle));
        const double d1 = rng.uniform(0, 540), d2 = rng.uniform(0, 540);
        const double w1 = *pair_weight(at({0, 0}, u), at({d1, 0}, v), params);
        const double w2 = *pair_weight(at({0, 0}, u), at({d2, 0}, v), params);
        ASSERT_GE(w1, 0.0);
        ASSERT_LE(w1, 1.0);
        if (d1 <= d2) ASSERT_GE(w1, w2);

        const double a2 = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const Eigen::Vector2d v2(std::cos(a2), std::sin(a2));
        const double w3 = *pair_weight(at({0, 0}, u), at({d1, 0}, v2), params);
        if (cosine(u, v) <= cosine(u, v2)) ASSERT_LE(w1, w3 + 1e-15);
    }
}

TEST(PdSimilarity, TopCountRoundsUp) {
    EXPECT_EQ(top_count(8, 0.75), 6);
    EXPECT_EQ(top_count(1, 0.75), 1);
    EXPECT_EQ(top_count(10, 0.75), 8);
    EXPECT_EQ(top_count(4, 1.0), 4);
}

TEST(PdSimilarity, CopyOfTrackIsFullySimilar) {
    gen::Rng rng(22);
    auto a = gen::random_detections(rng, 1, 1, 12, gen::random_unit_feature(rng, 64), {800, 500}, 200, 0.3);
    for (auto& d : a) d.motion_px = Eigen::Vector2d(rng.normal(5), rng.normal(5));
    auto b = a;
    for (auto& d : b) d.camera_id = 2;
    bool fallback = true;
    EXPECT_NEAR(pd_similarity(a, b, {}, fallback), 1.0, 1e-9);
    EXPECT_FALSE(fallback);
    EXPECT_NEAR(pd_similarity(a, a, {}), 1.0, 1e-9);
}

TEST(PdSimilarity, SparsePairsFallBackToMeanFeatures) {
    gen::Rng rng(23);
    const FeatureVec base = gen::random_unit_feature(rng, 32);
    auto a = gen::random_detections(rng, 1, 1, 3, base, {100, 100}, 5, 0.5);
    auto b = gen::random_detections(rng, 2, 1, 1, base, {110, 100}, 5, 0.5);
    bool fallback = false;
    const double pd = pd_similarity(a, b, {}, fallback);
    EXPECT_TRUE(fallback);
    EXPECT_NEAR(pd, cosine(mean_feature(a), mean_feature(b)), 1e-12);
    EXPECT_NEAR(*track_similarity(a, b, FeatureStrategy::PositionDirectionAware, {}),
                *track_similarity(a, b, FeatureStrategy::SimpleAveraging, {}), 1e-12);
}

TEST(PdSimilarity, TenByTenMatchesEnumeration) {
    // Boxes on a line 60 px apart; motions rotate slowly; features drift.
    std::vector<Detection> a, b;
    for (int k = 0; k < 10; ++k) {
        const double t = 0.3 * k;
        Detection p = at({100.0 + 60 * k, 300}, Eigen::Vector2d(std::cos(t), std::sin(t)),
                         vec({1.0f, 0.1f * k, 0.05f * k * k, 0.0f}));
        p.frame = k;
        p.camera_id = 1;
        Detection q = at({130.0 + 60 * k, 340}, Eigen::Vector2d(std::cos(-t), std::sin(-t)),
                         vec({1.0f, -0.1f * k, 0.0f, 0.2f * k}));
        q.frame = k;
        q.camera_id = 2;
        a.push_back(p);
        b.push_back(q);
    }
    bool fb_lib = true, fb_oracle = true;
    const double lib = pd_similarity(a, b, {}, fb_lib);
    const double ref = oracle::pd_by_enumeration(a, b, {}, fb_oracle);
    EXPECT_FALSE(fb_lib);
    EXPECT_FALSE(fb_oracle);
    EXPECT_NEAR(lib, ref, 1e-9);
}

TEST(PdSimilarity, RandomPairsMatchEnumeration) {
    gen::Rng rng(24);
    for (int n = 0; n < 200; ++n) {
        const FeatureVec base = gen::random_unit_feature(rng, 16);
        const FeatureVec other = rng.chance(0.5) ? base : gen::random_unit_feature(rng, 16);
        const Pixel ca(rng.uniform(200, 1700), rng.uniform(200, 900));
        const Pixel cb = ca + Pixel(rng.normal(200), rng.normal(200));
        auto a = gen::random_detections(rng, 1, 1, rng.integer(1, 12), base, ca, rng.uniform(5, 400), 0.3);
        auto b = gen::random_detections(rng, 2, 7, rng.integer(1, 12), other, cb, rng.uniform(5, 400), 0.3);
        SimilarityParams params;
        params.m_min_pairs = rng.integer(1, 12);
        bool fb_lib = false, fb_oracle = false;
        const double lib = pd_similarity(a, b, params, fb_lib);
        const double ref = oracle::pd_by_enumeration(a, b, params, fb_oracle);
        ASSERT_NEAR(lib, ref, 1e-9) << n;
        ASSERT_EQ(fb_lib, fb_oracle) << n;
    }
}

TEST(PdSimilarity, Symmetric) {
    gen::Rng rng(25);
    for (int n = 0; n < 100; ++n) {
        const Pixel c(rng.uniform(300, 1500), rng.uniform(300, 700));
        auto a = gen::random_detections(rng, 1, 1, rng.integer(1, 10), gen::random_unit_feature(rng, 8), c, 300, 0.4);
        auto b = gen::random_detections(rng, 2, 1, rng.integer(1, 10), gen::random_unit_feature(rng, 8), c, 300, 0.4);
        ASSERT_NEAR(pd_similarity(a, b, {}), pd_similarity(b, a, {}), 1e-12) << n;
    }
}

TEST(PdSimilarity, FallbackExactlyBelowMinimumPairs) {
    const SimilarityParams params;  // m_min_pairs = 8
    for (int near = 0; near <= 16; ++near) {
        // One detection in a; `near` detections within range and two far away.
        std::vector<Detection> a{at({500, 500}, Eigen::Vector2d(1, 0), vec({1, 0, 0}))};
        std::vector<Detection> b;
        for (int k = 0; k < near; ++k) {
            Detection d = at({500.0 + 10 * k, 520}, Eigen::Vector2d(1, 0), vec({1, 0.1f * k, 0}));
            d.frame = k;
            d.camera_id = 2;
            b.push_back(d);
        }
        for (int k = 0; k < 2; ++k) {
            Detection d = at({1500, 100.0 + k}, Eigen::Vector2d(0, 1), vec({0, 0, 1}));
            d.frame = 100 + k;
            d.camera_id = 2;
            b.push_back(d);
        }
        bool fallback = false;
        pd_similarity(a, b, params, fallback);
        EXPECT_EQ(fallback, near < 8) << near;
    }
}

TEST(PdSimilarity, UniformWeightsWithAllPairsAverageEveryCosine) {
    gen::Rng rng(26);
    std::vector<Detection> a, b;
    for (int k = 0; k < 4; ++k) {
        Detection d = at({700, 400}, Eigen::Vector2d(1, 1), gen::random_unit_feature(rng, 8));
        d.frame = k;
        a.push_back(d);
    }
    for (int k = 0; k < 5; ++k) {
        Detection d = at({700, 400}, Eigen::Vector2d(2, 2), gen::random_unit_feature(rng, 8));
        d.frame = k;
        d.camera_id = 3;
        b.push_back(d);
    }
    SimilarityParams params;
    params.top_fraction = 1.0;
    params.m_min_pairs = 20;
    double mean = 0.0;
    for (const auto& p : a) {
        for (const auto& q : b) mean += cosine(*p.feature, *q.feature);
    }
    mean /= 20.0;
    EXPECT_NEAR(pd_similarity(a, b, params), mean, 1e-12);
}

TEST(TrackSimilarity, Strategies) {
    std::vector<Detection> a{at({0, 0}, {}, vec({0.6f, 0.8f}))};
    std::vector<Detection> b = a;
    EXPECT_FALSE(track_similarity(a, b, FeatureStrategy::None, {}).has_value());
    EXPECT_NEAR(*track_similarity(a, b, FeatureStrategy::SimpleAveraging, {}), 1.0, 1e-7);
    std::vector<Detection> bare(2);
    EXPECT_FALSE(track_similarity(a, bare, FeatureStrategy::SimpleAveraging, {}).has_value());
    EXPECT_FALSE(track_similarity(bare, a, FeatureStrategy::PositionDirectionAware, {}).has_value());
}

TEST(TrackSimilarity, StrategyNamesRoundTrip) {
    for (auto s : {FeatureStrategy::None, FeatureStrategy::SimpleAveraging, FeatureStrategy::PositionDirectionAware}) {
        EXPECT_EQ(parse_feature_strategy(to_string(s)), s);
    }
    EXPECT_THROW(parse_feature_strategy("osnet"), ConfigError);
}

TEST(SimilarityParams, Validation) {
    SimilarityParams p;
    EXPECT_NO_THROW(p.validate());
    p.top_fraction = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = {};
    p.m_min_pairs = 0;
    EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace mcfuse
