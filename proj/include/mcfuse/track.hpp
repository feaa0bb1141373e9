// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <tuple>
#include <vector>

#include "mcfuse/geometry.hpp"

namespace mcfuse {

using FeatureVec = Eigen::VectorXf;

/// One per-camera observation. anchor_px, global_pos and motion_px are filled
/// in by transform_tracklets.
struct Detection {
    int frame = 0;
    int camera_id = 0;
    int local_track_id = 0;
    BBox bbox;
    double confidence = 1.0;
    std::optional<FeatureVec> feature;

    Pixel anchor_px = Pixel::Zero();
    GlobalPoint global_pos = GlobalPoint::Zero();
    /// Image-space velocity of the anchor (px/frame); absent for singletons.
    std::optional<Eigen::Vector2d> motion_px;

    auto key() const { return std::make_tuple(frame, camera_id, local_track_id); }
};

struct TrackletKey {
    int camera_id = 0;
    int local_track_id = 0;

    auto operator<=>(const TrackletKey&) const = default;
};

/// Frame-ordered detections from one camera sharing a local ID.
struct Tracklet {
    int camera_id = 0;
    int local_track_id = 0;
    std::vector<Detection> detections;

    TrackletKey key() const { return {camera_id, local_track_id}; }
    int start_frame() const { return detections.front().frame; }
    int end_frame() const { return detections.back().frame; }
    bool empty() const { return detections.empty(); }
};

/// Fused trajectory. Before per-frame dedup a frame may hold several points
/// (one per member camera); afterwards it holds at most one.
struct GlobalTrack {
    int global_id = 0;
    std::vector<TrackletKey> members;
    /// Sorted by (frame, camera_id, local_track_id).
    std::vector<Detection> points;

    int start_frame() const { return points.front().frame; }
    int end_frame() const { return points.back().frame; }
    bool empty() const { return points.empty(); }
};

}  // namespace mcfuse
