// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "mcfuse/errors.hpp"

namespace mcfuse {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

using Pixel = Eigen::Vector2d;
/// Point on the shared warehouse floor, in mosaic pixels.
using GlobalPoint = Eigen::Vector2d;
using Homography = Eigen::Matrix3d;

/// Axis-aligned box in image pixels.
template <typename Scalar>
struct BasicBBox {
    Scalar x1{0}, y1{0}, x2{0}, y2{0};

    Point2<Scalar> center() const { return {(x1 + x2) / Scalar(2), (y1 + y2) / Scalar(2)}; }
    Scalar width() const { return x2 - x1; }
    Scalar height() const { return y2 - y1; }
    bool valid() const { return x1 < x2 && y1 < y2; }

    bool operator==(const BasicBBox&) const = default;
};

using BBox = BasicBBox<double>;

enum class CoordinateMode { BBoxCenter, FootPosition };

/// Residual lens distortion left after calibration. Both coefficients zero is
/// the identity map.
struct RadialDistortion {
    double k_stretch = 0.0;
    double k_radial = 0.0;

    bool is_identity() const { return k_stretch == 0.0 && k_radial == 0.0; }
};

struct CameraModel {
    int camera_id = 0;
    int image_width = 1920;
    int image_height = 1080;
    Pixel image_center{960.0, 540.0};
    /// Undistorted image pixels -> floor coordinates.
    Homography homography = Homography::Identity();
    std::optional<RadialDistortion> distortion;

    /// Throws ConfigError if the homography is singular or the center lies
    /// outside the image.
    void validate() const;

    /// Largest distance from image_center to an image corner.
    double max_radius() const;
};

/// Ground-contact estimate: where the ray from the box center toward the
/// principal point leaves the box. Returns the box center when the two
/// coincide.
template <typename Scalar>
Point2<Scalar> foot_point(const BasicBBox<Scalar>& box, const Point2<Scalar>& image_center) {
    const Point2<Scalar> c = box.center();
    const Point2<Scalar> dir = image_center - c;
    if (dir.x() == Scalar(0) && dir.y() == Scalar(0)) return c;

    // Slab exit parameter; the center is inside so only the far face matters.
    const Point2<Scalar> half{box.width() / Scalar(2), box.height() / Scalar(2)};
    Scalar t = std::numeric_limits<Scalar>::infinity();
    for (int k = 0; k < 2; ++k) {
        if (dir[k] != Scalar(0)) t = std::min(t, half[k] / std::abs(dir[k]));
    }
    Point2<Scalar> out = c + t * dir;
    // Snap the exit coordinate onto the face it crossed.
    if (std::abs(dir.x()) * half.y() >= std::abs(dir.y()) * half.x()) {
        out.x() = dir.x() > 0 ? box.x2 : box.x1;
    } else {
        out.y() = dir.y() > 0 ? box.y2 : box.y1;
    }
    return out;
}

/// Applies a planar homography. Throws DegenerateProjection when the point
/// maps to (or next to) the line at infinity.
template <typename Scalar>
Point2<Scalar> project(const Point2<Scalar>& pt, const Eigen::Matrix<Scalar, 3, 3>& h) {
    const Eigen::Matrix<Scalar, 3, 1> q = h * pt.homogeneous();
    if (std::abs(q.z()) <= Scalar(1e-9)) {
        throw DegenerateProjection("projection hits the line at infinity");
    }
    return q.hnormalized();
}

Pixel distort(const Pixel& pt, const CameraModel& cam);

/// Inverse of distort by fixed-point iteration (at most 50 steps, 1e-6 px).
Pixel undistort(const Pixel& pt, const CameraModel& cam);

Pixel anchor_point(const BBox& box, CoordinateMode mode, const CameraModel& cam);

const char* to_string(CoordinateMode mode);
CoordinateMode parse_coordinate_mode(const std::string& text);

}  // namespace mcfuse
