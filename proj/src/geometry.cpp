// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/geometry.hpp"

#include <string>

namespace mcfuse {

void CameraModel::validate() const {
    if (image_width <= 0 || image_height <= 0) {
        throw ConfigError("camera " + std::to_string(camera_id) + ": image size must be positive");
    }
    if (std::abs(homography.determinant()) <= 1e-12) {
        throw ConfigError("camera " + std::to_string(camera_id) + ": homography is singular");
    }
    if (!homography.allFinite()) {
        throw ConfigError("camera " + std::to_string(camera_id) + ": homography has non-finite entries");
    }
    if (image_center.x() < 0 || image_center.x() > image_width || image_center.y() < 0 ||
        image_center.y() > image_height) {
        throw ConfigError("camera " + std::to_string(camera_id) + ": image_center outside the image");
    }
}

double CameraModel::max_radius() const {
    const double dx = std::max(image_center.x(), image_width - image_center.x());
    const double dy = std::max(image_center.y(), image_height - image_center.y());
    return std::hypot(dx, dy);
}

namespace {

// Vertical residual plus radial polynomial, both about the image center.
Pixel apply_distortion(const Pixel& pt, const Pixel& center, const RadialDistortion& d, double r_max) {
    const Pixel rel = pt - center;
    const double r = rel.norm();
    Pixel out = center + rel * (1.0 + d.k_radial * r * r);
    out.y() += d.k_stretch * rel.y() * (r / r_max);
    return out;
}

}  // namespace

Pixel distort(const Pixel& pt, const CameraModel& cam) {
    if (!cam.distortion || cam.distortion->is_identity()) return pt;
    return apply_distortion(pt, cam.image_center, *cam.distortion, cam.max_radius());
}

Pixel undistort(const Pixel& pt, const CameraModel& cam) {
    if (!cam.distortion || cam.distortion->is_identity()) return pt;
    const RadialDistortion& d = *cam.distortion;
    const Pixel& c = cam.image_center;
    const double r_max = cam.max_radius();
    const Pixel target = pt - c;

    Pixel rel = target;
    for (int iter = 0; iter < 50; ++iter) {
        const double r = rel.norm();
        Pixel next = target;
        next.y() -= d.k_stretch * rel.y() * (r / r_max);
        next /= (1.0 + d.k_radial * r * r);
        const double step = (next - rel).norm();
        rel = next;
        if (step < 1e-6) {
            // Accept only if the forward map actually lands on the input.
            if ((apply_distortion(c + rel, c, d, r_max) - pt).norm() < 1e-6) return c + rel;
        }
    }
    throw NonConvergent("undistort did not converge for camera " + std::to_string(cam.camera_id));
}

Pixel anchor_point(const BBox& box, CoordinateMode mode, const CameraModel& cam) {
    switch (mode) {
        case CoordinateMode::BBoxCenter:
            return box.center();
        case CoordinateMode::FootPosition:
            return foot_point(box, cam.image_center);
    }
    return box.center();
}

const char* to_string(CoordinateMode mode) {
    return mode == CoordinateMode::BBoxCenter ? "bbox-center" : "foot";
}

CoordinateMode parse_coordinate_mode(const std::string& text) {
    if (text == "bbox-center" || text == "bbox_center" || text == "center") return CoordinateMode::BBoxCenter;
    if (text == "foot" || text == "foot-position" || text == "foot_position") return CoordinateMode::FootPosition;
    throw ConfigError("unknown coordinate mode '" + text + "' (expected bbox-center|foot)");
}

}  // namespace mcfuse
