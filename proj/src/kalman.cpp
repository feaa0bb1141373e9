// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/kalman.hpp"

#include "mcfuse/errors.hpp"

namespace mcfuse {

namespace {

Eigen::Matrix4d transition(int dt) {
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 2) = dt;
    f(1, 3) = dt;
    return f;
}

Eigen::Matrix4d process_cov(int dt, double q) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(2, 2) = q * dt;
    m(3, 3) = q * dt;
    return m;
}

}  // namespace

void ConstantVelocityFilter::initialize(int frame, const GlobalPoint& first) {
    const double r = params_.measurement_noise;
    state_.frame = frame;
    state_.state << first.x(), first.y(), 0.0, 0.0;
    state_.covariance = Eigen::Vector4d(r, r, 100.0 * r, 100.0 * r).asDiagonal();
}

void ConstantVelocityFilter::initialize(int frame0, const GlobalPoint& p0, int frame1, const GlobalPoint& p1) {
    const double r = params_.measurement_noise;
    const double dt = frame1 - frame0;
    const Eigen::Vector2d v = (p1 - p0) / dt;
    state_.frame = frame0;
    state_.state << p0.x(), p0.y(), v.x(), v.y();
    const double vv = 2.0 * r / (dt * dt);
    state_.covariance = Eigen::Vector4d(r, r, vv, vv).asDiagonal();
}

void ConstantVelocityFilter::predict(int n_frames) {
    if (n_frames <= 0) return;
    const Eigen::Matrix4d f = transition(n_frames);
    state_.state = f * state_.state;
    state_.covariance = f * state_.covariance * f.transpose() + process_cov(n_frames, params_.process_noise);
    state_.frame += n_frames;
}

void ConstantVelocityFilter::update(const GlobalPoint& z) {
    Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    const Eigen::Matrix2d s = h * state_.covariance * h.transpose() +
                              params_.measurement_noise * Eigen::Matrix2d::Identity();
    const Eigen::Matrix<double, 4, 2> k = state_.covariance * h.transpose() * s.inverse();
    state_.state += k * (z - h * state_.state);
    // Joseph form keeps the covariance symmetric PSD.
    const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * h;
    state_.covariance = ikh * state_.covariance * ikh.transpose() +
                        k * (params_.measurement_noise * Eigen::Matrix2d::Identity()) * k.transpose();
    state_.covariance = 0.5 * (state_.covariance + state_.covariance.transpose()).eval();
}

KalmanState fit_constant_velocity(std::span<const FramePoint> observations, const KalmanParams& params) {
    if (observations.empty()) throw EmptyTrack("cannot fit a Kalman filter to an empty track");
    ConstantVelocityFilter kf(params);
    if (observations.size() == 1) {
        kf.initialize(observations[0].first, observations[0].second);
        return kf.state();
    }
    kf.initialize(observations[0].first, observations[0].second, observations[1].first, observations[1].second);
    for (std::size_t i = 1; i < observations.size(); ++i) {
        kf.predict(observations[i].first - kf.state().frame);
        kf.update(observations[i].second);
    }
    return kf.state();
}

KalmanState propagate(const KalmanState& s, int n_frames, const KalmanParams& params) {
    KalmanState out = s;
    if (n_frames <= 0) return out;
    const Eigen::Matrix4d f = transition(n_frames);
    out.state = f * s.state;
    out.covariance = f * s.covariance * f.transpose() + process_cov(n_frames, params.process_noise);
    out.frame = s.frame + n_frames;
    return out;
}

}  // namespace mcfuse
