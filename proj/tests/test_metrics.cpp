// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "mcfuse/hungarian.hpp"
#include "mcfuse/metrics.hpp"
#include "oracles.hpp"

namespace mcfuse {
namespace {

// Two identities 500 px apart for four frames; from the third frame on the
// prediction carries each identity under the other's label.
std::pair<LabeledTimeline, LabeledTimeline> swap_fixture() {
    LabeledTimeline gt, pred;
    for (int f = 0; f < 4; ++f) {
        const GlobalPoint a(100 + 10 * f, 100), b(100 + 10 * f, 600);
        gt[f] = {{1, a}, {2, b}};
        const bool swapped = f >= 2;
        pred[f] = {{swapped ? 2 : 1, a}, {swapped ? 1 : 2, b}};
    }
    return {gt, pred};
}

LabeledTimeline relabeled(const LabeledTimeline& t, int offset) {
    LabeledTimeline out = t;
    for (auto& [f, pts] : out) {
        for (auto& p : pts) p.id = 100 - p.id + offset;
    }
    return out;
}

LabeledTimeline shifted(const LabeledTimeline& t, const GlobalPoint& s) {
    LabeledTimeline out = t;
    for (auto& [f, pts] : out) {
        for (auto& p : pts) p.pos += s;
    }
    return out;
}

TEST(PointSimilarity, Examples) {
    const MatchingParams p;
    EXPECT_DOUBLE_EQ(point_similarity({3, 4}, {3, 4}, p), 1.0);
    EXPECT_DOUBLE_EQ(point_similarity({0, 0}, {260, 0}, p), 0.0);
    EXPECT_DOUBLE_EQ(point_similarity({0, 0}, {0, 400}, p), 0.0);
    EXPECT_DOUBLE_EQ(point_similarity({0, 0}, {39, 52}, p), 0.75);  // distance 65
}

TEST(Hungarian, DiagonalPreference) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(4, 4, 5.0);
    c.diagonal().setZero();
    const Assignment a = hungarian(c);
    ASSERT_EQ(a.pairs.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(a.pairs[i], std::make_pair(i, i));
    EXPECT_DOUBLE_EQ(a.cost, 0.0);
}

TEST(Hungarian, TwoByTwo) {
    Eigen::MatrixXd c(2, 2);
    c << 1, 2, 2, 1;
    const Assignment a = hungarian(c);
    EXPECT_EQ(a.pairs, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
    EXPECT_DOUBLE_EQ(a.cost, 2.0);
}

TEST(Hungarian, ThreeByThreeSeedSeven) {
    gen::Rng rng(7);
    Eigen::MatrixXd c(3, 3);
    for (int i = 0; i < 9; ++i) c(i / 3, i % 3) = rng.uniform(0, 10);
    EXPECT_NEAR(hungarian(c).cost, oracle::min_assignment_cost(c), 1e-12);
}

TEST(Hungarian, RandomRectangularMatchesPermutations) {
    gen::Rng rng(51);
    for (int n = 0; n < 300; ++n) {
        const int rows = rng.integer(1, 5), cols = rng.integer(1, 5);
        Eigen::MatrixXd c(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) c(i, j) = rng.chance(0.2) ? 1.0 : rng.uniform(-5, 5);
        }
        const Assignment a = hungarian(c);
        ASSERT_EQ(a.pairs.size(), static_cast<std::size_t>(std::min(rows, cols)));
        double sum = 0.0;
        for (const auto& [i, j] : a.pairs) sum += c(i, j);
        ASSERT_NEAR(sum, a.cost, 1e-9);
        const double best = rows <= cols ? oracle::min_assignment_cost(c)
                                         : oracle::min_assignment_cost(Eigen::MatrixXd(c.transpose()));
        ASSERT_NEAR(a.cost, best, 1e-9) << n;
    }
}

TEST(Hungarian, EmptyMatrix) { EXPECT_TRUE(hungarian(Eigen::MatrixXd(0, 3)).pairs.empty()); }

TEST(Mota, ExactPrediction) {
    gen::Rng rng(52);
    const auto gt = gen::random_truth(rng, 3, 20);
    const ClearResult r = mota(gt, gt, {});
    EXPECT_DOUBLE_EQ(r.mota, 100.0);
    EXPECT_EQ(r.fp + r.fn + r.idsw, 0);
}

TEST(Mota, EmptyPredictionMissesEverything) {
    LabeledTimeline gt;
    for (int f = 0; f < 10; ++f) gt[f] = {{1, {10.0 * f, 0}}};
    const ClearResult r = mota(gt, {}, {});
    EXPECT_EQ(r.fn, 10);
    EXPECT_DOUBLE_EQ(r.mota, 0.0);
}

TEST(Mota, LabelSwapCountsTwoSwitches) {
    const auto [gt, pred] = swap_fixture();
    const ClearResult r = mota(gt, pred, {});
    EXPECT_EQ(r.idsw, 2);
    EXPECT_EQ(r.fp, 0);
    EXPECT_EQ(r.fn, 0);
    EXPECT_DOUBLE_EQ(r.mota, 75.0);
    EXPECT_DOUBLE_EQ(oracle::clear_by_enumeration(gt, pred, {}).mota, 75.0);
}

TEST(Mota, CanGoNegative) {
    LabeledTimeline gt, pred;
    gt[0] = {{1, {0, 0}}};
    pred[0] = {{1, {1000, 0}}, {2, {2000, 0}}, {3, {3000, 0}}};
    EXPECT_DOUBLE_EQ(mota(gt, pred, {}).mota, -300.0);
}

TEST(Mota, EmptyGroundTruthThrows) {
    LabeledTimeline pred;
    pred[0] = {{1, {0, 0}}};
    EXPECT_THROW(mota({}, pred, {}), EmptyGroundTruth);
    EXPECT_THROW(idf1({}, pred, {}), EmptyGroundTruth);
    EXPECT_THROW(hota({}, pred, {}), EmptyGroundTruth);
}

TEST(Mota, DuplicateIdentityInFrameRejected) {
    LabeledTimeline gt;
    gt[0] = {{1, {0, 0}}, {1, {5, 5}}};
    EXPECT_THROW(mota(gt, gt, {}), ConfigError);
}

TEST(Idf1, ExactPrediction) {
    gen::Rng rng(53);
    const auto gt = gen::random_truth(rng, 3, 20);
    EXPECT_DOUBLE_EQ(idf1(gt, gt, {}).idf1, 100.0);
}

TEST(Idf1, HalfCoveredIdentity) {
    LabeledTimeline gt, pred;
    for (int f = 0; f < 10; ++f) {
        gt[f] = {{1, {10.0 * f, 0}}};
        if (f < 5) pred[f] = {{7, {10.0 * f, 0}}};
    }
    const IdentityResult r = idf1(gt, pred, {});
    EXPECT_EQ(r.idtp, 5);
    EXPECT_EQ(r.idfn, 5);
    EXPECT_EQ(r.idfp, 0);
    EXPECT_NEAR(r.idf1, 100.0 * 10.0 / 15.0, 1e-12);
}

TEST(Idf1, LabelSwapKeepsTwoFramesPerPairing) {
    const auto [gt, pred] = swap_fixture();
    const IdentityResult r = idf1(gt, pred, {});
    EXPECT_EQ(r.idtp, 4);
    EXPECT_DOUBLE_EQ(r.idf1, 50.0);
    EXPECT_DOUBLE_EQ(oracle::idf1_by_enumeration(gt, pred, {}), 50.0);
}

TEST(Hota, ExactPredictionScoresFullyAtEveryAlpha) {
    gen::Rng rng(54);
    const auto gt = gen::random_truth(rng, 3, 20);
    const HotaResult r = hota(gt, gt, {});
    EXPECT_NEAR(r.hota, 100.0, 1e-9);
    for (const auto& [alpha, v] : r.per_alpha) EXPECT_NEAR(v, 100.0, 1e-9) << alpha;
}

TEST(Hota, MissingIdentityGivesRootHalf) {
    LabeledTimeline gt, pred;
    for (int f = 0; f < 6; ++f) {
        gt[f] = {{1, {10.0 * f, 0}}, {2, {10.0 * f, 900}}};
        pred[f] = {{5, {10.0 * f, 0}}};
    }
    const HotaResult r = hota(gt, pred, {});
    EXPECT_NEAR(r.deta, 50.0, 1e-9);
    EXPECT_NEAR(r.assa, 100.0, 1e-9);
    EXPECT_NEAR(r.hota, 100.0 * std::sqrt(0.5), 1e-9);
    for (const auto& [alpha, v] : r.per_alpha) EXPECT_NEAR(v, 70.71, 0.005) << alpha;
}

TEST(Hota, LabelSwapMatchesEnumeration) {
    const auto [gt, pred] = swap_fixture();
    const HotaResult r = hota(gt, pred, {});
    const auto ref = oracle::hota_by_enumeration(gt, pred, {});
    EXPECT_NEAR(r.hota, ref.hota, 1e-9);
    ASSERT_EQ(r.per_alpha.size(), ref.per_alpha.size());
    for (std::size_t a = 0; a < ref.per_alpha.size(); ++a) EXPECT_NEAR(r.per_alpha[a].second, ref.per_alpha[a], 1e-9);
    EXPECT_NEAR(r.hota, 100.0 / std::sqrt(3.0), 1e-9);  // DetA 1, each pairing keeps 2 of 6 frames
}

void expect_matches_oracles(const gen::MetricCase& c) {
    const MatchingParams params;
    const ClearResult m = mota(c.gt, c.pred, params);
    const auto m_ref = oracle::clear_by_enumeration(c.gt, c.pred, params);
    ASSERT_NEAR(m.mota, m_ref.mota, 1e-9) << c.name;
    ASSERT_EQ(m.idsw, m_ref.idsw) << c.name;
    ASSERT_EQ(m.fp, m_ref.fp) << c.name;
    ASSERT_EQ(m.fn, m_ref.fn) << c.name;
    ASSERT_NEAR(idf1(c.gt, c.pred, params).idf1, oracle::idf1_by_enumeration(c.gt, c.pred, params), 1e-9) << c.name;
    const HotaResult h = hota(c.gt, c.pred, params);
    const auto h_ref = oracle::hota_by_enumeration(c.gt, c.pred, params);
    ASSERT_NEAR(h.hota, h_ref.hota, 1e-9) << c.name;
    ASSERT_NEAR(h.deta, h_ref.deta, 1e-9) << c.name;
    ASSERT_NEAR(h.assa, h_ref.assa, 1e-9) << c.name;
}

TEST(Metrics, ExhaustiveSmallCasesMatchOracles) {
    const auto cases = gen::exhaustive_metric_cases();
    ASSERT_GE(cases.size(), 200u);
    for (const auto& c : cases) ASSERT_NO_FATAL_FAILURE(expect_matches_oracles(c));
}

TEST(Metrics, RandomSmallCasesMatchOracles) {
    for (const auto& c : gen::random_metric_cases(500, 55)) ASSERT_NO_FATAL_FAILURE(expect_matches_oracles(c));
}

TEST(Metrics, InvariantUnderRelabelingAndTranslation) {
    for (const auto& c : gen::random_metric_cases(200, 56)) {
        const EvalReport base = evaluate(c.gt, c.pred, {});
        const EvalReport renamed = evaluate(c.gt, relabeled(c.pred, 3), {});
        const GlobalPoint s(1234.5, -987.25);
        const EvalReport moved = evaluate(shifted(c.gt, s), shifted(c.pred, s), {});
        for (const EvalReport* r : {&renamed, &moved}) {
            ASSERT_NEAR(r->hota, base.hota, 1e-9) << c.name;
            ASSERT_NEAR(r->idf1, base.idf1, 1e-9) << c.name;
            ASSERT_NEAR(r->mota, base.mota, 1e-9) << c.name;
        }
    }
}

TEST(Metrics, Ranges) {
    for (const auto& c : gen::random_metric_cases(300, 57)) {
        const EvalReport r = evaluate(c.gt, c.pred, {});
        ASSERT_GE(r.hota, 0.0);
        ASSERT_LE(r.hota, 100.0 + 1e-9);
        ASSERT_GE(r.idf1, 0.0);
        ASSERT_LE(r.idf1, 100.0 + 1e-9);
        ASSERT_LE(r.mota, 100.0 + 1e-9);
        ASSERT_GE(r.fp, 0);
        ASSERT_GE(r.fn, 0);
        ASSERT_GE(r.idsw, 0);
    }
}

TEST(Metrics, PerfectOnlyWhenIdentical) {
    gen::Rng rng(58);
    for (int n = 0; n < 100; ++n) {
        const auto gt = gen::random_truth(rng, rng.integer(1, 6), rng.integer(1, 30));
        const EvalReport same = evaluate(gt, gt, {});
        ASSERT_DOUBLE_EQ(same.hota, 100.0);
        ASSERT_DOUBLE_EQ(same.idf1, 100.0);
        ASSERT_DOUBLE_EQ(same.mota, 100.0);
        const EvalReport off = evaluate(gt, shifted(gt, {30, 0}), {});
        ASSERT_LT(off.hota, 100.0);
    }
}

TEST(MatchingParams, Validation) {
    MatchingParams p;
    EXPECT_EQ(p.alpha_grid.size(), 19u);
    EXPECT_DOUBLE_EQ(p.alpha_grid.front(), 0.05);
    EXPECT_DOUBLE_EQ(p.alpha_grid.back(), 0.95);
    EXPECT_NO_THROW(p.validate());
    p.alpha_grid = {0.5, 0.4};
    EXPECT_THROW(p.validate(), ConfigError);
    p = {};
    p.sim_dist_max = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace mcfuse
