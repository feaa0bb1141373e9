// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "generators.hpp"
#include "mcfuse/fusion.hpp"
#include "mcfuse/kalman.hpp"

namespace mcfuse {
namespace {

TEST(KalmanPredict, StationaryTrackStaysPut) {
    const GlobalTrack t = gen::line_track(1, 0, 10, {50, 50}, {0, 0});
    const MotionPrediction p = kalman_predict(t, 5, {});
    EXPECT_NEAR(p.position.x(), 50.0, 1e-6);
    EXPECT_NEAR(p.position.y(), 50.0, 1e-6);
    EXPECT_NEAR(p.direction.norm(), 0.0, 1e-6);
}

TEST(KalmanPredict, LinearMotionExtrapolates) {
    // Last observation (38, 19) at frame 19; three more frames of (+2, +1).
    const GlobalTrack t = gen::line_track(1, 0, 20, {0, 0}, {2, 1});
    const MotionPrediction p = kalman_predict(t, 3, {});
    EXPECT_NEAR(p.position.x(), 44.0, 0.5);
    EXPECT_NEAR(p.position.y(), 22.0, 0.5);
    EXPECT_GT(p.direction.normalized().dot(Eigen::Vector2d(2, 1).normalized()), 0.999);
}

TEST(KalmanPredict, NoisyLineStaysCloseOnAverage) {
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        gen::Rng rng(seed);
        GlobalTrack t = gen::line_track(1, 0, 30, {0, 0}, {3, -1});
        for (auto& d : t.points) d.global_pos += GlobalPoint(rng.normal(1.0), rng.normal(1.0));
        const MotionPrediction p = kalman_predict(t, 1, {});
        total += (p.position - GlobalPoint(3.0 * 30, -30.0)).norm();
    }
    EXPECT_LT(total / 30.0, 3.0);
}

TEST(KalmanPredict, SinglePointPredictsNoMotion) {
    const GlobalTrack t = gen::line_track(1, 4, 1, {7, 8}, {0, 0});
    const MotionPrediction p = kalman_predict(t, 6, {});
    EXPECT_EQ(p.position, GlobalPoint(7, 8));
    EXPECT_EQ(p.direction, Eigen::Vector2d::Zero());
}

TEST(KalmanPredict, NoiseFreeErrorIsTinyAndGrowsAtMostLinearly) {
    gen::Rng rng(41);
    for (int n = 0; n < 200; ++n) {
        const GlobalPoint start(rng.uniform(-500, 500), rng.uniform(-500, 500));
        const Eigen::Vector2d v(rng.normal(8), rng.normal(8));
        const int len = rng.integer(2, 40);
        const GlobalTrack t = gen::line_track(1, rng.integer(0, 100), len, start, v);
        double first = 0.0;
        for (int g = 1; g <= 10; ++g) {
            const GlobalPoint truth = start + (len - 1 + g) * v;
            const double err = (kalman_predict(t, g, {}).position - truth).norm();
            ASSERT_LT(err, 1e-3) << n << " gap " << g;
            if (g == 1) first = err;
            ASSERT_LE(err, g * first + 1e-9) << n << " gap " << g;
        }
    }
}

TEST(KalmanFilter, CovarianceStaysSymmetricAndNonNegative) {
    gen::Rng rng(42);
    std::vector<FramePoint> obs;
    GlobalPoint p(0, 0);
    for (int f = 0; f < 50; f += rng.integer(1, 3)) {
        p += GlobalPoint(4 + rng.normal(1), rng.normal(1));
        obs.emplace_back(f, p);
    }
    const KalmanState s = fit_constant_velocity(obs, {});
    EXPECT_LT((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GE(s.covariance.diagonal().minCoeff(), 0.0);
    const KalmanState later = propagate(s, 7, {});
    EXPECT_LT((later.covariance - later.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GT(later.covariance(0, 0), s.covariance(0, 0));
    EXPECT_EQ(later.frame, s.frame + 7);
}

TEST(KalmanFilter, TwoPointInitializationSetsVelocity) {
    ConstantVelocityFilter kf;
    kf.initialize(3, {10, 10}, 5, {14, 6});
    EXPECT_EQ(kf.state().velocity(), Eigen::Vector2d(2, -2));
    EXPECT_EQ(kf.state().position(), GlobalPoint(10, 10));
    EXPECT_EQ(kf.state().frame, 3);
    kf.predict(2);
    EXPECT_EQ(kf.state().position(), GlobalPoint(14, 6));
    EXPECT_EQ(kf.state().frame, 5);
}

}  // namespace
}  // namespace mcfuse
