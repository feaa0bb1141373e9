// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "mcfuse/errors.hpp"
#include "mcfuse/hungarian.hpp"

namespace mcfuse {

std::vector<double> MatchingParams::default_alpha_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 19; ++k) grid.push_back(k / 20.0);
    return grid;
}

void MatchingParams::validate() const {
    if (!(sim_dist_max > 0)) throw ConfigError("sim_dist_max must be > 0");
    if (alpha_grid.empty()) throw ConfigError("alpha grid is empty");
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        if (!(alpha_grid[i] > 0 && alpha_grid[i] < 1)) throw ConfigError("alpha values must lie in (0, 1)");
        if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1])) throw ConfigError("alpha grid must be ascending");
    }
}

double point_similarity(const GlobalPoint& a, const GlobalPoint& b, const MatchingParams& params) {
    return std::max(0.0, 1.0 - (a - b).norm() / params.sim_dist_max);
}

long count_points(const LabeledTimeline& t) {
    long n = 0;
    for (const auto& [f, pts] : t) n += static_cast<long>(pts.size());
    return n;
}

namespace {

// Dense re-indexing of identities plus per-frame views.
struct Indexed {
    std::vector<int> gt_ids, pred_ids;
    std::map<int, int> gt_index, pred_index;
    std::vector<int> frames;
};

void check_unique(const LabeledTimeline& t, const char* what) {
    for (const auto& [frame, pts] : t) {
        std::set<int> seen;
        for (const auto& p : pts) {
            if (!seen.insert(p.id).second) {
                throw ConfigError(std::string(what) + ": identity " + std::to_string(p.id) +
                                  " appears twice in frame " + std::to_string(frame));
            }
        }
    }
}

Indexed index(const LabeledTimeline& gt, const LabeledTimeline& pred) {
    check_unique(gt, "ground truth");
    check_unique(pred, "prediction");
    Indexed ix;
    std::set<int> g, p, f;
    for (const auto& [frame, pts] : gt) {
        f.insert(frame);
        for (const auto& q : pts) g.insert(q.id);
    }
    for (const auto& [frame, pts] : pred) {
        f.insert(frame);
        for (const auto& q : pts) p.insert(q.id);
    }
    ix.gt_ids.assign(g.begin(), g.end());
    ix.pred_ids.assign(p.begin(), p.end());
    ix.frames.assign(f.begin(), f.end());
    for (std::size_t i = 0; i < ix.gt_ids.size(); ++i) ix.gt_index[ix.gt_ids[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < ix.pred_ids.size(); ++i) ix.pred_index[ix.pred_ids[i]] = static_cast<int>(i);
    return ix;
}

const std::vector<LabeledPoint>& at(const LabeledTimeline& t, int frame) {
    static const std::vector<LabeledPoint> kEmpty;
    auto it = t.find(frame);
    return it == t.end() ? kEmpty : it->second;
}

Eigen::MatrixXd similarity(const std::vector<LabeledPoint>& g, const std::vector<LabeledPoint>& p,
                           const MatchingParams& params) {
    Eigen::MatrixXd s(g.size(), p.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) s(i, j) = point_similarity(g[i].pos, p[j].pos, params);
    }
    return s;
}

}  // namespace

ClearResult mota(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params) {
    const Indexed ix = index(gt, pred);
    const long num_gt = count_points(gt);
    if (num_gt == 0) throw EmptyGroundTruth("ground truth has no points");

    constexpr int kUnset = std::numeric_limits<int>::min();
    std::vector<int> last_tracker(ix.gt_ids.size(), kUnset);  // for ID switches
    std::vector<int> last_frame(ix.gt_ids.size(), kUnset);    // frame of that match

    ClearResult r;
    for (int frame : ix.frames) {
        const auto& g = at(gt, frame);
        const auto& p = at(pred, frame);
        const Eigen::MatrixXd sim = similarity(g, p, params);
        Eigen::MatrixXd score = Eigen::MatrixXd::Zero(sim.rows(), sim.cols());
        for (Eigen::Index i = 0; i < sim.rows(); ++i) {
            const int gi = ix.gt_index.at(g[i].id);
            for (Eigen::Index j = 0; j < sim.cols(); ++j) {
                if (!(sim(i, j) > 0.0)) continue;
                const bool continuing = last_frame[gi] == frame - 1 && last_tracker[gi] == p[j].id;
                score(i, j) = (continuing ? 1000.0 : 0.0) + sim(i, j);
            }
        }
        const Assignment m = max_score_matching(score);
        for (const auto& [i, j] : m.pairs) {
            const int gi = ix.gt_index.at(g[i].id);
            if (last_tracker[gi] != kUnset && last_tracker[gi] != p[j].id) ++r.idsw;
            last_tracker[gi] = p[j].id;
            last_frame[gi] = frame;
        }
        const long matched = static_cast<long>(m.pairs.size());
        r.tp += matched;
        r.fn += static_cast<long>(g.size()) - matched;
        r.fp += static_cast<long>(p.size()) - matched;
    }
    r.mota = 100.0 * (1.0 - static_cast<double>(r.fn + r.fp + r.idsw) / static_cast<double>(num_gt));
    return r;
}

IdentityResult idf1(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params) {
    const Indexed ix = index(gt, pred);
    const long num_gt = count_points(gt);
    if (num_gt == 0) throw EmptyGroundTruth("ground truth has no points");
    const long num_pred = count_points(pred);

    Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(ix.gt_ids.size(), ix.pred_ids.size());
    for (int frame : ix.frames) {
        const auto& g = at(gt, frame);
        const auto& p = at(pred, frame);
        for (const auto& a : g) {
            for (const auto& b : p) {
                if (point_similarity(a.pos, b.pos, params) > 0.0) {
                    overlap(ix.gt_index.at(a.id), ix.pred_index.at(b.id)) += 1.0;
                }
            }
        }
    }
    const Assignment m = max_score_matching(overlap);

    IdentityResult r;
    r.idtp = std::lround(m.cost);
    r.idfn = num_gt - r.idtp;
    r.idfp = num_pred - r.idtp;
    r.idf1 = 100.0 * 2.0 * static_cast<double>(r.idtp) / static_cast<double>(num_gt + num_pred);
    return r;
}

HotaResult hota(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params) {
    const Indexed ix = index(gt, pred);
    if (count_points(gt) == 0) throw EmptyGroundTruth("ground truth has no points");
    const auto ng = static_cast<Eigen::Index>(ix.gt_ids.size());
    const auto np = static_cast<Eigen::Index>(ix.pred_ids.size());
    constexpr double kEps = std::numeric_limits<double>::epsilon();

    // Pass 1: soft co-occurrence of identities -> global alignment score.
    Eigen::MatrixXd potential = Eigen::MatrixXd::Zero(ng, np);
    Eigen::VectorXd gt_count = Eigen::VectorXd::Zero(ng);
    Eigen::VectorXd pred_count = Eigen::VectorXd::Zero(np);
    std::vector<Eigen::MatrixXd> sims;
    sims.reserve(ix.frames.size());
    for (int frame : ix.frames) {
        const auto& g = at(gt, frame);
        const auto& p = at(pred, frame);
        sims.push_back(similarity(g, p, params));
        const Eigen::MatrixXd& s = sims.back();
        for (const auto& a : g) gt_count(ix.gt_index.at(a.id)) += 1.0;
        for (const auto& b : p) pred_count(ix.pred_index.at(b.id)) += 1.0;
        if (s.size() == 0) continue;
        const Eigen::VectorXd row_sum = s.rowwise().sum();
        const Eigen::RowVectorXd col_sum = s.colwise().sum();
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            for (Eigen::Index j = 0; j < s.cols(); ++j) {
                const double denom = row_sum(i) + col_sum(j) - s(i, j);
                if (denom > kEps) {
                    potential(ix.gt_index.at(g[i].id), ix.pred_index.at(p[j].id)) += s(i, j) / denom;
                }
            }
        }
    }
    Eigen::MatrixXd alignment(ng, np);
    for (Eigen::Index i = 0; i < ng; ++i) {
        for (Eigen::Index j = 0; j < np; ++j) {
            alignment(i, j) = potential(i, j) / (gt_count(i) + pred_count(j) - potential(i, j));
        }
    }

    // Pass 2: one association-aware assignment per frame, filtered per alpha.
    const std::size_t na = params.alpha_grid.size();
    std::vector<double> tp(na, 0.0), fn(na, 0.0), fp(na, 0.0);
    std::vector<Eigen::MatrixXd> match_count(na, Eigen::MatrixXd::Zero(ng, np));
    for (std::size_t f = 0; f < ix.frames.size(); ++f) {
        const auto& g = at(gt, ix.frames[f]);
        const auto& p = at(pred, ix.frames[f]);
        const Eigen::MatrixXd& s = sims[f];
        Eigen::MatrixXd score(s.rows(), s.cols());
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            for (Eigen::Index j = 0; j < s.cols(); ++j) {
                score(i, j) = alignment(ix.gt_index.at(g[i].id), ix.pred_index.at(p[j].id)) * s(i, j);
            }
        }
        const Assignment m = max_score_matching(score);
        for (std::size_t a = 0; a < na; ++a) {
            double matched = 0.0;
            for (const auto& [i, j] : m.pairs) {
                if (s(i, j) >= params.alpha_grid[a] - kEps) {
                    matched += 1.0;
                    match_count[a](ix.gt_index.at(g[i].id), ix.pred_index.at(p[j].id)) += 1.0;
                }
            }
            tp[a] += matched;
            fn[a] += static_cast<double>(g.size()) - matched;
            fp[a] += static_cast<double>(p.size()) - matched;
        }
    }

    HotaResult r;
    double hota_sum = 0.0, deta_sum = 0.0, assa_sum = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
        const Eigen::MatrixXd& mc = match_count[a];
        double ass_sum = 0.0;
        for (Eigen::Index i = 0; i < ng; ++i) {
            for (Eigen::Index j = 0; j < np; ++j) {
                if (mc(i, j) == 0.0) continue;
                const double denom = std::max(1.0, gt_count(i) + pred_count(j) - mc(i, j));
                ass_sum += mc(i, j) * (mc(i, j) / denom);
            }
        }
        const double assa = ass_sum / std::max(1.0, tp[a]);
        const double deta = tp[a] / std::max(1.0, tp[a] + fn[a] + fp[a]);
        const double h = std::sqrt(deta * assa);
        r.per_alpha.emplace_back(params.alpha_grid[a], 100.0 * h);
        hota_sum += h;
        deta_sum += deta;
        assa_sum += assa;
    }
    r.hota = 100.0 * hota_sum / static_cast<double>(na);
    r.deta = 100.0 * deta_sum / static_cast<double>(na);
    r.assa = 100.0 * assa_sum / static_cast<double>(na);
    return r;
}

EvalReport evaluate(const LabeledTimeline& gt, const LabeledTimeline& pred, const MatchingParams& params) {
    params.validate();
    EvalReport rep;
    rep.num_gt = count_points(gt);
    rep.num_pred = count_points(pred);
    if (rep.num_gt == 0) throw EmptyGroundTruth("ground truth has no points");

    const ClearResult c = mota(gt, pred, params);
    const IdentityResult id = idf1(gt, pred, params);
    const HotaResult h = hota(gt, pred, params);
    rep.mota = c.mota;
    rep.fp = c.fp;
    rep.fn = c.fn;
    rep.idsw = c.idsw;
    rep.idf1 = id.idf1;
    rep.idtp = id.idtp;
    rep.idfp = id.idfp;
    rep.idfn = id.idfn;
    rep.hota = h.hota;
    rep.deta = h.deta;
    rep.assa = h.assa;
    rep.per_alpha = h.per_alpha;
    return rep;
}

}  // namespace mcfuse
