// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mcfuse/appearance.hpp"
#include "mcfuse/kalman.hpp"
#include "mcfuse/track.hpp"

namespace mcfuse {

using CameraRig = std::map<int, CameraModel>;

/// Thresholds for overlap (duplicate) merging and gap merging. Distances are
/// in global floor px; cosine thresholds are strict lower bounds.
struct FusionConfig {
    CoordinateMode coordinate_mode = CoordinateMode::FootPosition;
    FeatureStrategy feature_strategy = FeatureStrategy::None;

    double merge_avg_dist = 130.0;
    double merge_max_dist = 300.0;
    double dir_cos_min = 0.8;
    double app_sim_min = 0.85;
    double app_sim_low = 0.5;

    int max_gap_frames = 10;
    double gap_dist = 130.0;
    /// Points used for the initial direction of the later track in a gap merge.
    int initial_direction_points = 5;

    SimilarityParams similarity;
    KalmanParams kalman;

    void validate() const;
};

/// Sets anchor_px, global_pos and motion_px on every detection. Throws
/// UnknownCamera for detections whose camera is not in the rig.
std::vector<Tracklet> transform_tracklets(std::vector<Tracklet> tracklets, const CameraRig& cameras,
                                          CoordinateMode mode);

/// Duplicate test for two simultaneously observed tracklets from different
/// cameras: positional, direction and (optionally) appearance consistency.
bool overlap_merge_test(const Tracklet& a, const Tracklet& b, const FusionConfig& cfg);

/// Connected components of the overlap relation. IDs start at 1 in order of
/// earliest start frame, then (camera_id, local_track_id).
std::vector<GlobalTrack> merge_overlaps(std::span<const Tracklet> tracklets, const FusionConfig& cfg);

/// Keeps, per frame, the point whose anchor is nearest its camera's image
/// center; ties go to the lower camera_id.
GlobalTrack dedup_frames(GlobalTrack track, const CameraRig& cameras);

struct MotionPrediction {
    GlobalPoint position;
    Eigen::Vector2d direction;
};

MotionPrediction kalman_predict(const GlobalTrack& track, int n_frames, const KalmanParams& params);

/// Distance gate for gap merging after appearance adjustment.
double gap_distance_threshold(std::optional<double> similarity, const FusionConfig& cfg);

/// Displacement over the first `points` points of a track.
Eigen::Vector2d initial_direction(const GlobalTrack& track, int points);

struct GapAssessment {
    bool accepted = false;
    int gap = 0;
    double distance = 0.0;
    double direction_cos = 0.0;
    double threshold = 0.0;
    std::optional<double> similarity;
};

GapAssessment assess_gap(const GlobalTrack& earlier, const GlobalTrack& later, const FusionConfig& cfg);
bool gap_merge_test(const GlobalTrack& earlier, const GlobalTrack& later, const FusionConfig& cfg);

/// Greedy chaining of temporally disjoint fragments until no link is added.
std::vector<GlobalTrack> merge_gaps(std::vector<GlobalTrack> tracks, const FusionConfig& cfg);

/// transform -> merge_overlaps -> dedup_frames -> merge_gaps. Output IDs are
/// renumbered from 1 by start frame.
std::vector<GlobalTrack> fuse(std::vector<Tracklet> tracklets, const CameraRig& cameras, const FusionConfig& cfg);

}  // namespace mcfuse
