// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <span>
#include <utility>

#include "mcfuse/geometry.hpp"

namespace mcfuse {

struct KalmanParams {
    double process_noise = 1.0;       ///< velocity noise, global px^2 / frame^2
    double measurement_noise = 10.0;  ///< position noise, global px^2
};

/// (x, y, vx, vy) with covariance, valid at `frame`.
struct KalmanState {
    Eigen::Vector4d state = Eigen::Vector4d::Zero();
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
    int frame = 0;

    GlobalPoint position() const { return state.head<2>(); }
    Eigen::Vector2d velocity() const { return state.tail<2>(); }
};

/// Constant-velocity filter over frame-indexed floor positions.
class ConstantVelocityFilter {
public:
    explicit ConstantVelocityFilter(KalmanParams params = {}) : params_(params) {}

    /// Starts from the first observation; velocity from the second when given.
    void initialize(int frame, const GlobalPoint& first);
    void initialize(int frame0, const GlobalPoint& p0, int frame1, const GlobalPoint& p1);

    void predict(int n_frames);
    void update(const GlobalPoint& z);

    const KalmanState& state() const { return state_; }

private:
    KalmanParams params_;
    KalmanState state_;
};

using FramePoint = std::pair<int, GlobalPoint>;

/// Runs the filter over frame-ordered observations; returns the state at the
/// last observation. Requires at least one observation.
KalmanState fit_constant_velocity(std::span<const FramePoint> observations, const KalmanParams& params);

/// Propagates a state n_frames forward without updates.
KalmanState propagate(const KalmanState& s, int n_frames, const KalmanParams& params);

}  // namespace mcfuse
