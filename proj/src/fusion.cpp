// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mcfuse {

void FusionConfig::validate() const {
    if (!(merge_avg_dist > 0) || !(merge_max_dist > 0) || !(gap_dist > 0)) {
        throw ConfigError("fusion distances must be > 0");
    }
    for (double c : {dir_cos_min, app_sim_min, app_sim_low}) {
        if (c < -1.0 || c > 1.0) throw ConfigError("fusion cosine thresholds must lie in [-1, 1]");
    }
    if (max_gap_frames < 1) throw ConfigError("fusion.max_gap_frames must be >= 1");
    if (initial_direction_points < 2) throw ConfigError("fusion.initial_direction_points must be >= 2");
    if (!(kalman.process_noise >= 0) || !(kalman.measurement_noise > 0)) {
        throw ConfigError("kalman noise parameters must be non-negative (measurement > 0)");
    }
    similarity.validate();
}

namespace {

const CameraModel& camera_for(const CameraRig& cameras, int camera_id) {
    auto it = cameras.find(camera_id);
    if (it == cameras.end()) throw UnknownCamera("unknown camera id " + std::to_string(camera_id));
    return it->second;
}

void assign_motion(std::vector<Detection>& dets) {
    const std::size_t n = dets.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (n < 2) {
            dets[i].motion_px.reset();
            continue;
        }
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? i : i + 1;
        const double dt = dets[hi].frame - dets[lo].frame;
        dets[i].motion_px = (dets[hi].anchor_px - dets[lo].anchor_px) / dt;
    }
}

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

bool point_order(const Detection& a, const Detection& b) { return a.key() < b.key(); }

}  // namespace

std::vector<Tracklet> transform_tracklets(std::vector<Tracklet> tracklets, const CameraRig& cameras,
                                          CoordinateMode mode) {
    for (auto& t : tracklets) {
        const CameraModel& cam = camera_for(cameras, t.camera_id);
        for (auto& d : t.detections) {
            if (d.camera_id != t.camera_id) {
                throw ConfigError("detection camera_id does not match its tracklet");
            }
            d.anchor_px = anchor_point(d.bbox, mode, cam);
            d.global_pos = project<double>(d.anchor_px, cam.homography);
        }
        assign_motion(t.detections);
    }
    return tracklets;
}

bool overlap_merge_test(const Tracklet& a, const Tracklet& b, const FusionConfig& cfg) {
    if (a.camera_id == b.camera_id) return false;
    if (a.empty() || b.empty()) return false;
    if (a.end_frame() < b.start_frame() || b.end_frame() < a.start_frame()) return false;

    // Frame-aligned pairs over the common frames.
    std::vector<std::pair<const Detection*, const Detection*>> common;
    auto ia = a.detections.begin();
    auto ib = b.detections.begin();
    while (ia != a.detections.end() && ib != b.detections.end()) {
        if (ia->frame < ib->frame) {
            ++ia;
        } else if (ib->frame < ia->frame) {
            ++ib;
        } else {
            common.emplace_back(&*ia, &*ib);
            ++ia;
            ++ib;
        }
    }
    if (common.empty()) return false;

    double sum = 0.0;
    for (const auto& [p, q] : common) {
        const double d = (p->global_pos - q->global_pos).norm();
        if (!(d < cfg.merge_max_dist)) return false;
        sum += d;
    }
    if (sum / static_cast<double>(common.size()) > cfg.merge_avg_dist) return false;

    const Eigen::Vector2d da = common.back().first->global_pos - common.front().first->global_pos;
    const Eigen::Vector2d db = common.back().second->global_pos - common.front().second->global_pos;
    if (da.norm() < 1e-12 || db.norm() < 1e-12) return false;
    if (!(cosine(da, db) > cfg.dir_cos_min)) return false;

    if (cfg.feature_strategy != FeatureStrategy::None) {
        const auto sim = track_similarity(a.detections, b.detections, cfg.feature_strategy, cfg.similarity);
        if (sim && !(*sim > cfg.app_sim_min)) return false;
    }
    return true;
}

std::vector<GlobalTrack> merge_overlaps(std::span<const Tracklet> tracklets, const FusionConfig& cfg) {
    const std::size_t n = tracklets.size();
    DisjointSet sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (sets.find(i) == sets.find(j) && tracklets[i].camera_id != tracklets[j].camera_id) continue;
            if (overlap_merge_test(tracklets[i], tracklets[j], cfg)) sets.unite(i, j);
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < n; ++i) {
        if (tracklets[i].empty()) continue;
        components[sets.find(i)].push_back(i);
    }

    using Order = std::tuple<int, int, int>;
    std::vector<std::pair<Order, GlobalTrack>> staged;
    for (const auto& [root, idx] : components) {
        GlobalTrack g;
        Order first{std::numeric_limits<int>::max(), 0, 0};
        for (std::size_t i : idx) {
            const Tracklet& t = tracklets[i];
            g.members.push_back(t.key());
            g.points.insert(g.points.end(), t.detections.begin(), t.detections.end());
            first = std::min(first, Order{t.start_frame(), t.camera_id, t.local_track_id});
        }
        std::sort(g.members.begin(), g.members.end());
        std::sort(g.points.begin(), g.points.end(), point_order);
        staged.emplace_back(first, std::move(g));
    }
    std::sort(staged.begin(), staged.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<GlobalTrack> out;
    out.reserve(staged.size());
    int next_id = 1;
    for (auto& [order, g] : staged) {
        g.global_id = next_id++;
        out.push_back(std::move(g));
    }
    return out;
}

GlobalTrack dedup_frames(GlobalTrack track, const CameraRig& cameras) {
    std::vector<Detection> kept;
    kept.reserve(track.points.size());
    std::size_t i = 0;
    while (i < track.points.size()) {
        std::size_t j = i;
        const Detection* best = nullptr;
        double best_r = std::numeric_limits<double>::infinity();
        // Points are sorted by (frame, camera, local id), so the first strict
        // minimum wins ties by camera order.
        for (; j < track.points.size() && track.points[j].frame == track.points[i].frame; ++j) {
            const Detection& d = track.points[j];
            const double r = (d.anchor_px - camera_for(cameras, d.camera_id).image_center).norm();
            if (r < best_r) {
                best_r = r;
                best = &d;
            }
        }
        kept.push_back(*best);
        i = j;
    }
    track.points = std::move(kept);
    return track;
}

namespace {

std::vector<FramePoint> frame_points(const GlobalTrack& track) {
    std::vector<FramePoint> obs;
    std::size_t i = 0;
    while (i < track.points.size()) {
        std::size_t j = i;
        GlobalPoint sum = GlobalPoint::Zero();
        for (; j < track.points.size() && track.points[j].frame == track.points[i].frame; ++j) {
            sum += track.points[j].global_pos;
        }
        obs.emplace_back(track.points[i].frame, sum / static_cast<double>(j - i));
        i = j;
    }
    return obs;
}

MotionPrediction predict_from(const KalmanState& fitted, int n_frames, const KalmanParams& params) {
    const KalmanState s = propagate(fitted, n_frames, params);
    return {s.position(), s.velocity()};
}

}  // namespace

MotionPrediction kalman_predict(const GlobalTrack& track, int n_frames, const KalmanParams& params) {
    const auto obs = frame_points(track);
    return predict_from(fit_constant_velocity(obs, params), n_frames, params);
}

double gap_distance_threshold(std::optional<double> similarity, const FusionConfig& cfg) {
    double t = cfg.gap_dist;
    if (similarity) {
        if (*similarity > cfg.app_sim_min) {
            t = 2.0 * cfg.gap_dist;
        } else if (*similarity < cfg.app_sim_low) {
            t = cfg.gap_dist / 2.0;
        }
    }
    return t;
}

Eigen::Vector2d initial_direction(const GlobalTrack& track, int points) {
    const auto obs = frame_points(track);
    if (obs.size() < 2) return Eigen::Vector2d::Zero();
    const std::size_t k = std::min(obs.size(), static_cast<std::size_t>(points));
    return obs[k - 1].second - obs[0].second;
}

namespace {

GapAssessment assess_with(const KalmanState& fitted, const GlobalTrack& earlier, const GlobalTrack& later,
                          const FusionConfig& cfg) {
    GapAssessment out;
    out.gap = later.start_frame() - earlier.end_frame();
    if (out.gap <= 0 || out.gap >= cfg.max_gap_frames) return out;

    const MotionPrediction pred = predict_from(fitted, out.gap, cfg.kalman);
    const Eigen::Vector2d init = initial_direction(later, cfg.initial_direction_points);
    out.distance = (pred.position - later.points.front().global_pos).norm();
    if (pred.direction.norm() < 1e-12 || init.norm() < 1e-12) return out;
    out.direction_cos = cosine(pred.direction, init);
    if (!(out.direction_cos > cfg.dir_cos_min)) return out;

    out.similarity = track_similarity(earlier.points, later.points, cfg.feature_strategy, cfg.similarity);
    out.threshold = gap_distance_threshold(out.similarity, cfg);
    out.accepted = out.distance < out.threshold;
    return out;
}

}  // namespace

GapAssessment assess_gap(const GlobalTrack& earlier, const GlobalTrack& later, const FusionConfig& cfg) {
    if (earlier.empty() || later.empty()) return {};
    const auto obs = frame_points(earlier);
    return assess_with(fit_constant_velocity(obs, cfg.kalman), earlier, later, cfg);
}

bool gap_merge_test(const GlobalTrack& earlier, const GlobalTrack& later, const FusionConfig& cfg) {
    return assess_gap(earlier, later, cfg).accepted;
}

std::vector<GlobalTrack> merge_gaps(std::vector<GlobalTrack> tracks, const FusionConfig& cfg) {
    std::erase_if(tracks, [](const GlobalTrack& t) { return t.empty(); });
    while (true) {
        const std::size_t n = tracks.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return std::pair(tracks[x].end_frame(), tracks[x].global_id) <
                   std::pair(tracks[y].end_frame(), tracks[y].global_id);
        });

        constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
        std::vector<std::size_t> succ(n, kNone);
        std::vector<bool> has_pred(n, false);
        bool linked = false;

        for (std::size_t a : order) {
            const GlobalTrack& ea = tracks[a];
            std::optional<KalmanState> fitted;
            std::size_t best = kNone;
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < n; ++b) {
                if (b == a || has_pred[b]) continue;
                const int gap = tracks[b].start_frame() - ea.end_frame();
                if (gap <= 0 || gap >= cfg.max_gap_frames) continue;
                if (!fitted) {
                    const auto obs = frame_points(ea);
                    fitted = fit_constant_velocity(obs, cfg.kalman);
                }
                const GapAssessment g = assess_with(*fitted, ea, tracks[b], cfg);
                if (!g.accepted) continue;
                if (g.distance < best_dist ||
                    (g.distance == best_dist && tracks[b].global_id < tracks[best].global_id)) {
                    best = b;
                    best_dist = g.distance;
                }
            }
            if (best != kNone) {
                succ[a] = best;
                has_pred[best] = true;
                linked = true;
            }
        }
        if (!linked) break;

        std::vector<GlobalTrack> merged;
        for (std::size_t head = 0; head < n; ++head) {
            if (has_pred[head]) continue;
            GlobalTrack chain = std::move(tracks[head]);
            for (std::size_t cur = succ[head]; cur != kNone; cur = succ[cur]) {
                GlobalTrack& next = tracks[cur];
                chain.members.insert(chain.members.end(), next.members.begin(), next.members.end());
                chain.points.insert(chain.points.end(), next.points.begin(), next.points.end());
            }
            std::sort(chain.members.begin(), chain.members.end());
            merged.push_back(std::move(chain));
        }
        tracks = std::move(merged);
    }
    return tracks;
}

std::vector<GlobalTrack> fuse(std::vector<Tracklet> tracklets, const CameraRig& cameras, const FusionConfig& cfg) {
    cfg.validate();
    std::erase_if(tracklets, [](const Tracklet& t) { return t.empty(); });
    const auto transformed = transform_tracklets(std::move(tracklets), cameras, cfg.coordinate_mode);
    auto tracks = merge_overlaps(transformed, cfg);
    for (auto& t : tracks) t = dedup_frames(std::move(t), cameras);
    tracks = merge_gaps(std::move(tracks), cfg);

    std::sort(tracks.begin(), tracks.end(), [](const GlobalTrack& x, const GlobalTrack& y) {
        return std::pair(x.start_frame(), x.global_id) < std::pair(y.start_frame(), y.global_id);
    });
    int next_id = 1;
    for (auto& t : tracks) t.global_id = next_id++;
    return tracks;
}

}  // namespace mcfuse
