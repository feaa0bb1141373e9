// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Geometry>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mcfuse/fusion.hpp"
#include "mcfuse/metrics.hpp"
#include "mcfuse/track.hpp"

namespace mcfuse::sim {

using FloorRect = Eigen::AlignedBox2d;

struct WorldConfig {
    Eigen::Vector2d floor_size{1500.0, 750.0};  ///< global px
    int n_workers = 5;
    int n_frames = 300;
    double fps = 5.0;
    double walk_speed_px = 10.0;  ///< mean step per frame, global px
    double turn_std = 0.25;       ///< heading increment std, radians per frame
    std::uint64_t seed = 42;

    void validate() const;
};

/// A ceiling camera as the simulator knows it: the true homography lives in
/// `camera`; fusion only ever sees the misaligned copy.
struct CameraPlacement {
    CameraModel camera;
    double misalignment_px = 0.0;
    /// person height / camera height, in [0, 1).
    double mount_height_ratio = 0.0;
    /// Half the body width in image px, padding around the foot-head segment.
    double body_half_width_px = 16.0;

    /// Floor region whose points map inside the image, clipped to the floor.
    FloorRect footprint(const Eigen::Vector2d& floor_size) const;
    void validate() const;
};

struct NoiseConfig {
    double det_miss_prob = 0.0;
    double fp_rate = 0.0;  ///< false-positive tracklets started per camera-frame
    double bbox_jitter_px = 0.0;
    double frag_prob = 0.0;
    int min_fragment_length = 2;
    /// Drop detections whose clipped box keeps less than this share of the
    /// unclipped area.
    double min_visible_fraction = 0.0;
    std::vector<FloorRect> occlusion_zones;
    int feature_dim = 0;  ///< 0 disables features
    double feature_noise_std = 0.0;
    double view_drift_gain = 0.0;

    void validate() const;
};

struct ScenarioConfig {
    WorldConfig world;
    std::vector<CameraPlacement> cameras;
    NoiseConfig noise;
    std::string feature_format = "csv";  ///< csv | bin

    void validate() const;
};

struct World {
    WorldConfig config;
    /// positions[w][t], worker identity w + 1.
    std::vector<std::vector<Eigen::Vector2d>> positions;
    std::vector<std::vector<double>> headings;

    LabeledTimeline truth() const;
};

World generate_world(const WorldConfig& cfg);

/// Identity embeddings and the shared view-dependent drift field.
class FeatureField {
public:
    FeatureField(int dim, std::uint64_t seed);

    int dim() const { return dim_; }
    Eigen::VectorXd identity(int id) const;
    /// Unit-scale drift for a normalized image position in [-1, 1]^2 and an
    /// image-space heading. Zero direction contributes no heading term.
    Eigen::VectorXd drift(const Eigen::Vector2d& normalized_pos, const Eigen::Vector2d& direction) const;

private:
    int dim_;
    std::uint64_t seed_;
    Eigen::MatrixXd basis_;  // dim x 6
};

/// e_id + gain * drift + N(0, (noise_std^2 / D) I), renormalized and rounded
/// to float.
FeatureVec synth_feature(const FeatureField& field, int identity, const Pixel& position_px,
                         const Eigen::Vector2d& direction, const Eigen::Vector2d& image_size,
                         const NoiseConfig& noise, std::mt19937_64& rng);

/// Head pixel of a person standing on `foot_px`: pushed away from the image
/// center by the mount-height ratio, then distorted.
Pixel head_pixel(const Pixel& foot_px, const CameraPlacement& placement);

/// Box around the foot-head segment, padded by the body half width. Not
/// clipped; observe() clips after jitter.
BBox person_bbox(const Pixel& low_px, const Pixel& head_px, const CameraPlacement& placement);

/// Homography actually handed to fusion (true one perturbed by misalignment).
Homography misaligned_homography(const CameraPlacement& placement, const Eigen::Vector2d& floor_size,
                                  std::uint64_t seed);

struct CameraObservation {
    CameraModel calibrated;
    std::vector<Tracklet> tracklets;
};

CameraObservation observe(const World& world, const CameraPlacement& placement, const NoiseConfig& noise,
                          std::uint64_t seed);

struct Scenario {
    World world;
    std::vector<CameraObservation> observations;

    CameraRig rig() const;
    std::vector<Tracklet> tracklets() const;
};

/// generate_world + observe for every camera. Per-camera seeds derive from
/// the world seed.
Scenario simulate(const ScenarioConfig& cfg);

/// Evenly spaced cols x rows ceiling cameras covering the floor, grown by
/// `margin` on every side, with the given fractional overlap between
/// neighbours.
std::vector<CameraPlacement> camera_grid(const Eigen::Vector2d& floor_size, int cols, int rows, double overlap,
                                         double margin = 0.0, int image_width = 1920, int image_height = 1080);

/// 8 workers, 6 overlapping cameras, 600 frames, distortion and misalignment;
/// features disabled.
ScenarioConfig reference_scenario(std::uint64_t seed = 1);

/// 5 workers, 4 cameras, 300 frames with default noise and features.
ScenarioConfig canonical_scenario(std::uint64_t seed = 42);

/// Deterministic sub-seed for a (seed, stream, index) triple.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace mcfuse::sim
