// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mcfuse::sim {

namespace {

enum Stream : std::uint64_t {
    kWorld = 1,
    kDetections = 2,
    kFragments = 3,
    kFalsePositives = 4,
    kFeatures = 5,
    kMisalignment = 6,
    kFeatureField = 7,
    kCamera = 8,
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Dividing by the inverse step keeps values such as 104.6 exact in decimal.
double round_to(double v, double step) {
    const double inv = std::round(1.0 / step);
    return std::round(v * inv) / inv;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gaussian(std::mt19937_64& rng, double stddev) {
    if (stddev <= 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, stddev)(rng);
}

double wrap_angle(double a) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    a = std::fmod(a + std::numbers::pi, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a - std::numbers::pi;
}

bool inside_image(const Pixel& p, const CameraModel& cam) {
    return p.x() >= 0.0 && p.y() >= 0.0 && p.x() < cam.image_width && p.y() < cam.image_height;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ (stream * 0x632BE59BD9B4E019ULL)) ^ index);
}

void WorldConfig::validate() const {
    if (!(floor_size.x() > 0 && floor_size.y() > 0)) throw ConfigError("world.floor_size must be positive");
    if (n_workers < 1) throw ConfigError("world.n_workers must be >= 1");
    if (n_frames < 1) throw ConfigError("world.n_frames must be >= 1");
    if (!(fps > 0)) throw ConfigError("world.fps must be > 0");
    if (!(walk_speed_px >= 0)) throw ConfigError("world.walk_speed_px must be >= 0");
    if (!(turn_std >= 0)) throw ConfigError("world.turn_std must be >= 0");
}

FloorRect CameraPlacement::footprint(const Eigen::Vector2d& floor_size) const {
    FloorRect box;
    const double w = camera.image_width;
    const double h = camera.image_height;
    for (const Pixel& corner : {Pixel(0, 0), Pixel(w, 0), Pixel(0, h), Pixel(w, h)}) {
        box.extend(project<double>(corner, camera.homography));
    }
    return box.intersection(FloorRect(Eigen::Vector2d::Zero(), floor_size));
}

void CameraPlacement::validate() const {
    camera.validate();
    if (!(mount_height_ratio >= 0.0 && mount_height_ratio < 1.0)) {
        throw ConfigError("camera " + std::to_string(camera.camera_id) + ": mount_height_ratio must be in [0, 1)");
    }
    if (!(misalignment_px >= 0)) throw ConfigError("misalignment_px must be >= 0");
    if (!(body_half_width_px > 0)) throw ConfigError("body_half_width_px must be > 0");
}

void NoiseConfig::validate() const {
    for (double p : {det_miss_prob, frag_prob, min_visible_fraction}) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("noise probabilities must lie in [0, 1]");
    }
    if (!(fp_rate >= 0.0 && fp_rate <= 1.0)) throw ConfigError("noise.fp_rate must lie in [0, 1]");
    if (!(bbox_jitter_px >= 0) || !(feature_noise_std >= 0) || !(view_drift_gain >= 0)) {
        throw ConfigError("noise standard deviations must be >= 0");
    }
    if (feature_dim < 0) throw ConfigError("noise.feature_dim must be >= 0");
    if (min_fragment_length < 1) throw ConfigError("noise.min_fragment_length must be >= 1");
}

void ScenarioConfig::validate() const {
    world.validate();
    noise.validate();
    if (cameras.empty()) throw ConfigError("scenario needs at least one camera");
    std::vector<int> ids;
    for (const auto& c : cameras) {
        c.validate();
        ids.push_back(c.camera.camera_id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw ConfigError("duplicate camera_id");
    if (feature_format != "csv" && feature_format != "bin") throw ConfigError("feature_format must be csv or bin");
}

LabeledTimeline World::truth() const {
    LabeledTimeline t;
    for (std::size_t w = 0; w < positions.size(); ++w) {
        for (std::size_t f = 0; f < positions[w].size(); ++f) {
            t[static_cast<int>(f)].push_back({static_cast<int>(w) + 1, positions[w][f]});
        }
    }
    return t;
}

World generate_world(const WorldConfig& cfg) {
    cfg.validate();
    World world;
    world.config = cfg;
    std::mt19937_64 rng(derive_seed(cfg.seed, kWorld));
    const Eigen::Vector2d size = cfg.floor_size;

    for (int w = 0; w < cfg.n_workers; ++w) {
        std::vector<Eigen::Vector2d> pos;
        std::vector<double> heading;
        Eigen::Vector2d p(round_to(uniform(rng, 0.0, size.x()), 0.01), round_to(uniform(rng, 0.0, size.y()), 0.01));
        double h = uniform(rng, -std::numbers::pi, std::numbers::pi);
        for (int f = 0; f < cfg.n_frames; ++f) {
            pos.push_back(p);
            heading.push_back(h);
            h = wrap_angle(h + gaussian(rng, cfg.turn_std));
            const double step = std::max(0.0, cfg.walk_speed_px * (1.0 + gaussian(rng, 0.1)));
            Eigen::Vector2d dir(std::cos(h), std::sin(h));
            Eigen::Vector2d next = p + step * dir;
            // Reflect off the floor walls.
            for (int k = 0; k < 2; ++k) {
                if (next[k] < 0.0) {
                    next[k] = -next[k];
                    dir[k] = -dir[k];
                } else if (next[k] > size[k]) {
                    next[k] = 2.0 * size[k] - next[k];
                    dir[k] = -dir[k];
                }
                next[k] = std::clamp(next[k], 0.0, size[k]);
            }
            h = std::atan2(dir.y(), dir.x());
            p = Eigen::Vector2d(round_to(next.x(), 0.01), round_to(next.y(), 0.01));
        }
        world.positions.push_back(std::move(pos));
        world.headings.push_back(std::move(heading));
    }
    return world;
}

FeatureField::FeatureField(int dim, std::uint64_t seed) : dim_(dim), seed_(seed), basis_(dim, 6) {
    std::mt19937_64 rng(derive_seed(seed, kFeatureField, 0));
    for (int k = 0; k < 6; ++k) {
        for (int i = 0; i < dim; ++i) basis_(i, k) = gaussian(rng, 1.0);
        const double n = basis_.col(k).norm();
        if (n > 0) basis_.col(k) /= n;
    }
}

Eigen::VectorXd FeatureField::identity(int id) const {
    std::mt19937_64 rng(derive_seed(seed_, kFeatureField, 1000 + static_cast<std::uint64_t>(id)));
    Eigen::VectorXd e(dim_);
    for (int i = 0; i < dim_; ++i) e(i) = gaussian(rng, 1.0);
    const double n = e.norm();
    return n > 0 ? Eigen::VectorXd(e / n) : e;
}

Eigen::VectorXd FeatureField::drift(const Eigen::Vector2d& normalized_pos, const Eigen::Vector2d& direction) const {
    const double half_pi = std::numbers::pi / 2.0;
    Eigen::Matrix<double, 6, 1> c;
    c(0) = std::cos(half_pi * normalized_pos.x());
    c(1) = std::sin(half_pi * normalized_pos.x());
    c(2) = std::cos(half_pi * normalized_pos.y());
    c(3) = std::sin(half_pi * normalized_pos.y());
    const double dn = direction.norm();
    c(4) = dn > 1e-12 ? direction.x() / dn : 0.0;
    c(5) = dn > 1e-12 ? direction.y() / dn : 0.0;
    return basis_ * c / std::sqrt(3.0);
}

FeatureVec synth_feature(const FeatureField& field, int identity, const Pixel& position_px,
                         const Eigen::Vector2d& direction, const Eigen::Vector2d& image_size,
                         const NoiseConfig& noise, std::mt19937_64& rng) {
    Eigen::VectorXd f = field.identity(identity);
    if (noise.view_drift_gain > 0.0) {
        const Eigen::Vector2d u(2.0 * position_px.x() / image_size.x() - 1.0,
                                2.0 * position_px.y() / image_size.y() - 1.0);
        f += noise.view_drift_gain * field.drift(u, direction);
    }
    if (noise.feature_noise_std > 0.0) {
        const double s = noise.feature_noise_std / std::sqrt(static_cast<double>(field.dim()));
        for (int i = 0; i < field.dim(); ++i) f(i) += gaussian(rng, s);
    }
    const double n = f.norm();
    if (n > 1e-12) f /= n;
    return f.cast<float>();
}

Pixel head_pixel(const Pixel& foot_px, const CameraPlacement& placement) {
    const CameraModel& cam = placement.camera;
    const Pixel ideal = cam.image_center + (foot_px - cam.image_center) / (1.0 - placement.mount_height_ratio);
    return distort(ideal, cam);
}

BBox person_bbox(const Pixel& low_px, const Pixel& head_px, const CameraPlacement& placement) {
    const double pad = placement.body_half_width_px;
    return BBox{std::min(low_px.x(), head_px.x()) - pad, std::min(low_px.y(), head_px.y()) - pad,
                std::max(low_px.x(), head_px.x()) + pad, std::max(low_px.y(), head_px.y()) + pad};
}

Homography misaligned_homography(const CameraPlacement& placement, const Eigen::Vector2d& floor_size,
                                  std::uint64_t seed) {
    const Homography& h = placement.camera.homography;
    if (placement.misalignment_px <= 0.0) return h;
    std::mt19937_64 rng(derive_seed(seed, kMisalignment, static_cast<std::uint64_t>(placement.camera.camera_id)));
    const FloorRect fp = placement.footprint(floor_size);
    const Eigen::Vector2d center = fp.isEmpty() ? project<double>(placement.camera.image_center, h) : fp.center();
    const double radius = fp.isEmpty() ? 1.0 : std::max(1.0, 0.5 * fp.diagonal().norm());

    const double phi = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const Eigen::Vector2d shift = placement.misalignment_px * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    const double max_angle = placement.misalignment_px / radius;
    const double theta = uniform(rng, -max_angle, max_angle);

    Eigen::Affine2d t = Eigen::Translation2d(center + shift) * Eigen::Rotation2Dd(theta) *
                        Eigen::Translation2d(-center);
    return t.matrix() * h;
}

CameraObservation observe(const World& world, const CameraPlacement& placement, const NoiseConfig& noise,
                          std::uint64_t seed) {
    const CameraModel& cam = placement.camera;
    const auto cam_index = static_cast<std::uint64_t>(cam.camera_id);
    std::mt19937_64 det_rng(derive_seed(seed, kDetections, cam_index));
    std::mt19937_64 frag_rng(derive_seed(seed, kFragments, cam_index));
    std::mt19937_64 fp_rng(derive_seed(seed, kFalsePositives, cam_index));
    std::mt19937_64 feat_rng(derive_seed(seed, kFeatures, cam_index));

    const FeatureField field(std::max(noise.feature_dim, 1), derive_seed(world.config.seed, kFeatureField));
    const bool with_features = noise.feature_dim > 0;
    const Eigen::Vector2d image_size(cam.image_width, cam.image_height);
    const Homography to_image = cam.homography.inverse();

    CameraObservation out;
    out.calibrated = cam;
    out.calibrated.homography = misaligned_homography(placement, world.config.floor_size, world.config.seed);

    // (order key, detections) per produced tracklet before local IDs exist.
    std::vector<std::pair<std::pair<int, int>, std::vector<Detection>>> staged;

    auto emit_run = [&](int worker, std::vector<Detection>& run) {
        if (run.empty()) return;
        std::vector<Detection> current{run.front()};
        for (std::size_t i = 1; i < run.size(); ++i) {
            const double u = uniform(frag_rng, 0.0, 1.0);
            const auto remaining = static_cast<int>(run.size() - i);
            if (static_cast<int>(current.size()) >= noise.min_fragment_length &&
                remaining >= noise.min_fragment_length && u < noise.frag_prob) {
                staged.push_back({{current.front().frame, worker}, std::move(current)});
                current.clear();
            }
            current.push_back(run[i]);
        }
        staged.push_back({{current.front().frame, worker}, std::move(current)});
        run.clear();
    };

    for (std::size_t w = 0; w < world.positions.size(); ++w) {
        const int identity = static_cast<int>(w) + 1;
        std::vector<Detection> run;
        for (std::size_t f = 0; f < world.positions[w].size(); ++f) {
            const Eigen::Vector2d& pos = world.positions[w][f];
            const Pixel foot = project<double>(pos, to_image);
            if (!inside_image(foot, cam)) {
                emit_run(identity, run);
                continue;
            }
            const bool missed = uniform(det_rng, 0.0, 1.0) < noise.det_miss_prob;
            const Pixel head = head_pixel(foot, placement);
            const bool occluded = std::any_of(noise.occlusion_zones.begin(), noise.occlusion_zones.end(),
                                              [&](const FloorRect& z) { return z.contains(pos); });
            const Pixel low = occluded ? Pixel(foot + 0.5 * (head - foot)) : foot;
            BBox box = person_bbox(low, head, placement);
            box.x1 += gaussian(det_rng, noise.bbox_jitter_px);
            box.y1 += gaussian(det_rng, noise.bbox_jitter_px);
            box.x2 += gaussian(det_rng, noise.bbox_jitter_px);
            box.y2 += gaussian(det_rng, noise.bbox_jitter_px);
            const double conf = uniform(det_rng, 0.6, 0.95);
            if (missed) continue;

            const double full_area = box.width() * box.height();
            box.x1 = round_to(std::clamp(box.x1, 0.0, image_size.x()), 0.01);
            box.y1 = round_to(std::clamp(box.y1, 0.0, image_size.y()), 0.01);
            box.x2 = round_to(std::clamp(box.x2, 0.0, image_size.x()), 0.01);
            box.y2 = round_to(std::clamp(box.y2, 0.0, image_size.y()), 0.01);
            if (box.width() < 2.0 || box.height() < 2.0) continue;
            if (box.width() * box.height() < noise.min_visible_fraction * full_area) continue;

            Detection d;
            d.frame = static_cast<int>(f);
            d.camera_id = cam.camera_id;
            d.bbox = box;
            d.confidence = round_to(conf, 0.001);
            if (with_features) {
                const double h = world.headings[w][f];
                const Eigen::Vector2d ahead = pos + Eigen::Vector2d(std::cos(h), std::sin(h));
                const Eigen::Vector2d dir = project<double>(ahead, to_image) - foot;
                d.feature = synth_feature(field, identity, foot, dir, image_size, noise, feat_rng);
            }
            run.push_back(std::move(d));
        }
        emit_run(identity, run);
    }

    // Short stationary false positives.
    const int n_frames = world.config.n_frames;
    int fp_count = 0;
    for (int f = 0; f < n_frames; ++f) {
        if (!(uniform(fp_rng, 0.0, 1.0) < noise.fp_rate)) continue;
        const int len = std::min(std::uniform_int_distribution<int>(2, 5)(fp_rng), n_frames - f);
        const double cx = uniform(fp_rng, 0.0, image_size.x());
        const double cy = uniform(fp_rng, 0.0, image_size.y());
        const double hw = placement.body_half_width_px + uniform(fp_rng, 0.0, 10.0);
        const double hh = uniform(fp_rng, 30.0, 80.0);
        BBox box{round_to(std::max(0.0, cx - hw), 0.01), round_to(std::max(0.0, cy - hh), 0.01),
                 round_to(std::min(image_size.x(), cx + hw), 0.01), round_to(std::min(image_size.y(), cy + hh), 0.01)};
        const int fake_identity = 1000000 + 1000 * cam.camera_id + fp_count++;
        if (len < 2 || !box.valid()) continue;
        std::vector<Detection> dets;
        for (int k = 0; k < len; ++k) {
            Detection d;
            d.frame = f + k;
            d.camera_id = cam.camera_id;
            d.bbox = box;
            d.confidence = round_to(uniform(fp_rng, 0.3, 0.6), 0.001);
            if (with_features) {
                d.feature = synth_feature(field, fake_identity, box.center(), Eigen::Vector2d::Zero(), image_size,
                                          noise, feat_rng);
            }
            dets.push_back(std::move(d));
        }
        staged.push_back({{f, 1000000 + fp_count}, std::move(dets)});
    }

    std::stable_sort(staged.begin(), staged.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    int next_local = 1;
    for (auto& [key, dets] : staged) {
        Tracklet t;
        t.camera_id = cam.camera_id;
        t.local_track_id = next_local++;
        for (auto& d : dets) d.local_track_id = t.local_track_id;
        t.detections = std::move(dets);
        out.tracklets.push_back(std::move(t));
    }
    return out;
}

CameraRig Scenario::rig() const {
    CameraRig rig;
    for (const auto& o : observations) rig[o.calibrated.camera_id] = o.calibrated;
    return rig;
}

std::vector<Tracklet> Scenario::tracklets() const {
    std::vector<Tracklet> all;
    for (const auto& o : observations) all.insert(all.end(), o.tracklets.begin(), o.tracklets.end());
    return all;
}

Scenario simulate(const ScenarioConfig& cfg) {
    cfg.validate();
    Scenario s;
    s.world = generate_world(cfg.world);
    for (const auto& placement : cfg.cameras) {
        s.observations.push_back(observe(s.world, placement, cfg.noise, derive_seed(cfg.world.seed, kCamera)));
    }
    return s;
}

std::vector<CameraPlacement> camera_grid(const Eigen::Vector2d& floor_size, int cols, int rows, double overlap,
                                         double margin, int image_width, int image_height) {
    if (cols < 1 || rows < 1) throw ConfigError("camera_grid needs at least one column and one row");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("camera_grid.overlap must be in [0, 1)");
    if (!(margin >= 0.0)) throw ConfigError("camera_grid.margin must be >= 0");
    const double cell_w = (floor_size.x() + 2.0 * margin) / (cols - (cols - 1) * overlap);
    const double cell_h = (floor_size.y() + 2.0 * margin) / (rows - (rows - 1) * overlap);
    const double scale = std::max(cell_w / image_width, cell_h / image_height);
    std::vector<CameraPlacement> out;
    int id = 1;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double gx = cell_w / 2.0 + c * cell_w * (1.0 - overlap) - margin;
            const double gy = cell_h / 2.0 + r * cell_h * (1.0 - overlap) - margin;
            CameraPlacement p;
            p.camera.camera_id = id++;
            p.camera.image_width = image_width;
            p.camera.image_height = image_height;
            p.camera.image_center = Pixel(image_width / 2.0, image_height / 2.0);
            Homography h = Homography::Identity();
            h(0, 0) = scale;
            h(1, 1) = scale;
            h(0, 2) = gx - scale * p.camera.image_center.x();
            h(1, 2) = gy - scale * p.camera.image_center.y();
            p.camera.homography = h;
            out.push_back(p);
        }
    }
    return out;
}

ScenarioConfig reference_scenario(std::uint64_t seed) {
    ScenarioConfig s;
    s.world.floor_size = {1500.0, 750.0};
    s.world.n_workers = 8;
    s.world.n_frames = 600;
    s.world.walk_speed_px = 10.0;
    s.world.turn_std = 0.1;
    s.world.seed = seed;
    s.cameras = camera_grid(s.world.floor_size, 3, 2, 0.5, 150.0);
    for (auto& c : s.cameras) {
        c.mount_height_ratio = 0.4;
        c.misalignment_px = 15.0;
        c.camera.distortion = RadialDistortion{0.15, 0.0};
    }
    s.noise.det_miss_prob = 0.05;
    s.noise.fp_rate = 0.005;
    s.noise.bbox_jitter_px = 3.0;
    s.noise.frag_prob = 0.05;
    s.noise.min_visible_fraction = 0.5;
    s.noise.feature_dim = 0;
    return s;
}

ScenarioConfig canonical_scenario(std::uint64_t seed) {
    ScenarioConfig s = reference_scenario(seed);
    s.world.n_workers = 5;
    s.world.n_frames = 300;
    s.world.floor_size = {1000.0, 560.0};
    s.cameras = camera_grid(s.world.floor_size, 2, 2, 0.5, 150.0);
    for (auto& c : s.cameras) {
        c.mount_height_ratio = 0.4;
        c.misalignment_px = 15.0;
        c.camera.distortion = RadialDistortion{0.15, 0.0};
    }
    s.noise.feature_dim = 512;
    s.noise.feature_noise_std = 0.3;
    s.noise.view_drift_gain = 0.5;
    s.noise.det_miss_prob = 0.02;
    s.noise.fp_rate = 0.001;
    s.noise.frag_prob = 0.01;
    return s;
}

}  // namespace mcfuse::sim
