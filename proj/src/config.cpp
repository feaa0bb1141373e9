// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcfuse/io.hpp"

namespace mcfuse {

namespace fs = std::filesystem;

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
        int line = 1, col = 1;
        for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": JSON syntax error: " + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

namespace {

std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

template <typename T>
T read_value(const Json& v, const std::string& where) {
    try {
        return v.get<T>();
    } catch (const Json::exception&) {
        throw ConfigError("field '" + where + "' has the wrong type");
    }
}

template <typename T>
T required(const Json& j, const char* key, const std::string& path) {
    const std::string where = join_path(path, key);
    if (!j.is_object() || !j.contains(key)) throw ConfigError("missing required field '" + where + "'");
    return read_value<T>(j.at(key), where);
}

template <typename T>
T optional(const Json& j, const char* key, const std::string& path, const T& fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return read_value<T>(j.at(key), join_path(path, key));
}

Eigen::Vector2d read_vec2(const Json& j, const std::string& where) {
    const auto v = read_value<std::vector<double>>(j, where);
    if (v.size() != 2) throw ConfigError("field '" + where + "' must have 2 entries");
    return {v[0], v[1]};
}

Json vec2(const Eigen::Vector2d& v) { return Json::array({v.x(), v.y()}); }

sim::FloorRect read_rect(const Json& j, const std::string& where) {
    const auto v = read_value<std::vector<double>>(j, where);
    if (v.size() != 4) throw ConfigError("field '" + where + "' must be [x1, y1, x2, y2]");
    return sim::FloorRect(Eigen::Vector2d(v[0], v[1]), Eigen::Vector2d(v[2], v[3]));
}

}  // namespace

FusionConfig fusion_config_from_json(const Json& j, const std::string& path) {
    FusionConfig c;
    if (j.is_null()) return c;
    if (!j.is_object()) throw ConfigError("field '" + path + "' must be an object");
    c.coordinate_mode =
        parse_coordinate_mode(optional<std::string>(j, "coordinate_mode", path, to_string(c.coordinate_mode)));
    c.feature_strategy =
        parse_feature_strategy(optional<std::string>(j, "feature_strategy", path, to_string(c.feature_strategy)));
    c.merge_avg_dist = optional(j, "merge_avg_dist", path, c.merge_avg_dist);
    c.merge_max_dist = optional(j, "merge_max_dist", path, c.merge_max_dist);
    c.dir_cos_min = optional(j, "dir_cos_min", path, c.dir_cos_min);
    c.app_sim_min = optional(j, "app_sim_min", path, c.app_sim_min);
    c.app_sim_low = optional(j, "app_sim_low", path, c.app_sim_low);
    c.max_gap_frames = optional(j, "max_gap_frames", path, c.max_gap_frames);
    c.gap_dist = optional(j, "gap_dist", path, c.gap_dist);
    c.initial_direction_points = optional(j, "initial_direction_points", path, c.initial_direction_points);
    if (j.contains("similarity")) {
        const Json& s = j.at("similarity");
        const std::string sp = join_path(path, "similarity");
        c.similarity.sigma_p = optional(s, "sigma_p", sp, c.similarity.sigma_p);
        c.similarity.d_max = optional(s, "d_max", sp, c.similarity.d_max);
        c.similarity.m_min_pairs = optional(s, "m_min_pairs", sp, c.similarity.m_min_pairs);
        c.similarity.top_fraction = optional(s, "top_fraction", sp, c.similarity.top_fraction);
    }
    if (j.contains("kalman")) {
        const Json& k = j.at("kalman");
        const std::string kp = join_path(path, "kalman");
        c.kalman.process_noise = optional(k, "process_noise", kp, c.kalman.process_noise);
        c.kalman.measurement_noise = optional(k, "measurement_noise", kp, c.kalman.measurement_noise);
    }
    c.validate();
    return c;
}

Json to_json(const FusionConfig& c) {
    Json j;
    j["coordinate_mode"] = to_string(c.coordinate_mode);
    j["feature_strategy"] = to_string(c.feature_strategy);
    j["merge_avg_dist"] = c.merge_avg_dist;
    j["merge_max_dist"] = c.merge_max_dist;
    j["dir_cos_min"] = c.dir_cos_min;
    j["app_sim_min"] = c.app_sim_min;
    j["app_sim_low"] = c.app_sim_low;
    j["max_gap_frames"] = c.max_gap_frames;
    j["gap_dist"] = c.gap_dist;
    j["initial_direction_points"] = c.initial_direction_points;
    j["similarity"] = {{"sigma_p", c.similarity.sigma_p},
                       {"d_max", c.similarity.d_max},
                       {"m_min_pairs", c.similarity.m_min_pairs},
                       {"top_fraction", c.similarity.top_fraction}};
    j["kalman"] = {{"process_noise", c.kalman.process_noise}, {"measurement_noise", c.kalman.measurement_noise}};
    return j;
}

MatchingParams matching_params_from_json(const Json& j, const std::string& path) {
    MatchingParams p;
    if (j.is_null()) return p;
    p.sim_dist_max = optional(j, "sim_dist_max", path, p.sim_dist_max);
    p.alpha_grid = optional(j, "alpha_grid", path, p.alpha_grid);
    p.validate();
    return p;
}

Json to_json(const MatchingParams& p) {
    Json j;
    j["sim_dist_max"] = p.sim_dist_max;
    return j;
}

CameraModel camera_from_json(const Json& j, const std::string& path) {
    CameraModel cam;
    cam.camera_id = required<int>(j, "camera_id", path);
    cam.image_width = required<int>(j, "width", path);
    cam.image_height = required<int>(j, "height", path);
    cam.image_center = Pixel(cam.image_width / 2.0, cam.image_height / 2.0);
    if (j.contains("image_center")) cam.image_center = read_vec2(j.at("image_center"), join_path(path, "image_center"));
    if (j.contains("homography")) {
        const auto h = read_value<std::vector<double>>(j.at("homography"), join_path(path, "homography"));
        if (h.size() != 9) throw ConfigError("field '" + join_path(path, "homography") + "' needs 9 values");
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) cam.homography(r, c) = h[static_cast<std::size_t>(3 * r + c)];
        }
    } else if (j.contains("pose")) {
        // Straight-down camera: center on the floor, floor px per image px, yaw.
        const Json& p = j.at("pose");
        const std::string pp = join_path(path, "pose");
        const Eigen::Vector2d g = read_vec2(required<Json>(p, "center", pp), join_path(pp, "center"));
        const double s = required<double>(p, "scale", pp);
        const double yaw = optional(p, "yaw", pp, 0.0);
        Eigen::Matrix2d r;
        r << std::cos(yaw), -std::sin(yaw), std::sin(yaw), std::cos(yaw);
        cam.homography.setIdentity();
        cam.homography.topLeftCorner<2, 2>() = s * r;
        cam.homography.topRightCorner<2, 1>() = g - s * r * cam.image_center;
    } else {
        throw ConfigError("missing required field '" + join_path(path, "homography") + "' (or 'pose')");
    }
    if (j.contains("distortion")) {
        const Json& d = j.at("distortion");
        const std::string dp = join_path(path, "distortion");
        cam.distortion = RadialDistortion{optional(d, "k_stretch", dp, 0.0), optional(d, "k_radial", dp, 0.0)};
    }
    cam.validate();
    return cam;
}

Json to_json(const CameraModel& cam) {
    Json j;
    j["camera_id"] = cam.camera_id;
    j["width"] = cam.image_width;
    j["height"] = cam.image_height;
    j["image_center"] = vec2(cam.image_center);
    Json h = Json::array();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) h.push_back(cam.homography(r, c) + 0.0);
    }
    j["homography"] = h;
    if (cam.distortion) {
        j["distortion"] = {{"k_stretch", cam.distortion->k_stretch}, {"k_radial", cam.distortion->k_radial}};
    }
    return j;
}

CameraRig rig_from_json(const Json& cameras, const std::string& path) {
    if (!cameras.is_array()) throw ConfigError("field '" + path + "' must be a list of cameras");
    CameraRig rig;
    for (std::size_t i = 0; i < cameras.size(); ++i) {
        CameraModel cam = camera_from_json(cameras[i], path + "[" + std::to_string(i) + "]");
        if (!rig.emplace(cam.camera_id, cam).second) {
            throw ConfigError("duplicate camera_id " + std::to_string(cam.camera_id) + " in '" + path + "'");
        }
    }
    return rig;
}

namespace {

void read_placement_extras(const Json& j, const std::string& path, sim::CameraPlacement& p) {
    p.misalignment_px = optional(j, "misalignment_px", path, p.misalignment_px);
    p.mount_height_ratio = optional(j, "mount_height_ratio", path, p.mount_height_ratio);
    p.body_half_width_px = optional(j, "body_half_width_px", path, p.body_half_width_px);
}

}  // namespace

sim::ScenarioConfig scenario_from_json(const Json& j) {
    sim::ScenarioConfig s;
    if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
    const Json& w = required<Json>(j, "world", "");
    s.world.floor_size = read_vec2(required<Json>(w, "floor_size", "world"), "world.floor_size");
    s.world.n_workers = required<int>(w, "n_workers", "world");
    s.world.n_frames = required<int>(w, "n_frames", "world");
    s.world.fps = optional(w, "fps", "world", s.world.fps);
    s.world.walk_speed_px = optional(w, "walk_speed_px", "world", s.world.walk_speed_px);
    s.world.turn_std = optional(w, "turn_std", "world", s.world.turn_std);
    s.world.seed = optional<std::uint64_t>(w, "seed", "world", s.world.seed);

    if (j.contains("cameras")) {
        const Json& cams = j.at("cameras");
        if (!cams.is_array()) throw ConfigError("field 'cameras' must be a list");
        for (std::size_t i = 0; i < cams.size(); ++i) {
            const std::string cp = "cameras[" + std::to_string(i) + "]";
            sim::CameraPlacement p;
            p.camera = camera_from_json(cams[i], cp);
            read_placement_extras(cams[i], cp, p);
            s.cameras.push_back(p);
        }
    } else if (j.contains("camera_grid")) {
        const Json& g = j.at("camera_grid");
        s.cameras = sim::camera_grid(s.world.floor_size, required<int>(g, "cols", "camera_grid"),
                                     required<int>(g, "rows", "camera_grid"),
                                     optional(g, "overlap", "camera_grid", 0.25),
                                     optional(g, "margin", "camera_grid", 0.0),
                                     optional(g, "width", "camera_grid", 1920),
                                     optional(g, "height", "camera_grid", 1080));
        for (auto& p : s.cameras) {
            read_placement_extras(g, "camera_grid", p);
            if (g.contains("distortion")) {
                const Json& d = g.at("distortion");
                p.camera.distortion = RadialDistortion{optional(d, "k_stretch", "camera_grid.distortion", 0.0),
                                                       optional(d, "k_radial", "camera_grid.distortion", 0.0)};
            }
        }
    } else {
        throw ConfigError("missing required field 'cameras' (or 'camera_grid')");
    }

    if (j.contains("noise")) {
        const Json& n = j.at("noise");
        s.noise.det_miss_prob = optional(n, "det_miss_prob", "noise", s.noise.det_miss_prob);
        s.noise.fp_rate = optional(n, "fp_rate", "noise", s.noise.fp_rate);
        s.noise.bbox_jitter_px = optional(n, "bbox_jitter_px", "noise", s.noise.bbox_jitter_px);
        s.noise.frag_prob = optional(n, "frag_prob", "noise", s.noise.frag_prob);
        s.noise.min_fragment_length = optional(n, "min_fragment_length", "noise", s.noise.min_fragment_length);
        s.noise.min_visible_fraction = optional(n, "min_visible_fraction", "noise", s.noise.min_visible_fraction);
        s.noise.feature_dim = optional(n, "feature_dim", "noise", s.noise.feature_dim);
        s.noise.feature_noise_std = optional(n, "feature_noise_std", "noise", s.noise.feature_noise_std);
        s.noise.view_drift_gain = optional(n, "view_drift_gain", "noise", s.noise.view_drift_gain);
        if (n.contains("occlusion_zones")) {
            const Json& zones = n.at("occlusion_zones");
            for (std::size_t i = 0; i < zones.size(); ++i) {
                s.noise.occlusion_zones.push_back(read_rect(zones[i], "noise.occlusion_zones[" + std::to_string(i) + "]"));
            }
        }
    }
    s.feature_format = optional<std::string>(j, "feature_format", "", s.feature_format);
    s.validate();
    return s;
}

Json to_json(const sim::ScenarioConfig& s) {
    Json j;
    j["world"] = {{"floor_size", vec2(s.world.floor_size)}, {"n_workers", s.world.n_workers},
                  {"n_frames", s.world.n_frames},           {"fps", s.world.fps},
                  {"walk_speed_px", s.world.walk_speed_px}, {"turn_std", s.world.turn_std},
                  {"seed", s.world.seed}};
    Json cams = Json::array();
    for (const auto& p : s.cameras) {
        Json c = to_json(p.camera);
        c["misalignment_px"] = p.misalignment_px;
        c["mount_height_ratio"] = p.mount_height_ratio;
        c["body_half_width_px"] = p.body_half_width_px;
        cams.push_back(c);
    }
    j["cameras"] = cams;
    Json zones = Json::array();
    for (const auto& z : s.noise.occlusion_zones) {
        zones.push_back({z.min().x(), z.min().y(), z.max().x(), z.max().y()});
    }
    j["noise"] = {{"det_miss_prob", s.noise.det_miss_prob},
                  {"fp_rate", s.noise.fp_rate},
                  {"bbox_jitter_px", s.noise.bbox_jitter_px},
                  {"frag_prob", s.noise.frag_prob},
                  {"min_fragment_length", s.noise.min_fragment_length},
                  {"min_visible_fraction", s.noise.min_visible_fraction},
                  {"occlusion_zones", zones},
                  {"feature_dim", s.noise.feature_dim},
                  {"feature_noise_std", s.noise.feature_noise_std},
                  {"view_drift_gain", s.noise.view_drift_gain}};
    j["feature_format"] = s.feature_format;
    return j;
}

sim::ScenarioConfig load_scenario_file(const std::string& path) {
    const Json j = load_json_file(path);
    try {
        return scenario_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string RunConfig::resolve(const std::string& p) const {
    if (p.empty()) return p;
    const fs::path path(p);
    if (path.is_absolute()) return p;
    return (fs::path(base_dir) / path).lexically_normal().string();
}

RunConfig run_config_from_json(const Json& j, const std::string& base_dir) {
    RunConfig c;
    c.base_dir = base_dir;
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    c.fusion = fusion_config_from_json(j.contains("fusion") ? j.at("fusion") : Json(), "fusion");
    c.cameras = rig_from_json(required<Json>(j, "cameras", ""), "cameras");
    const Json& inputs = required<Json>(j, "inputs", "");
    if (!inputs.is_array()) throw ConfigError("field 'inputs' must be a list");
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const std::string ip = "inputs[" + std::to_string(i) + "]";
        InputSpec in;
        in.camera_id = required<int>(inputs[i], "camera_id", ip);
        in.tracklets = required<std::string>(inputs[i], "tracklets", ip);
        in.features = optional<std::string>(inputs[i], "features", ip, "");
        if (!c.cameras.count(in.camera_id)) {
            throw UnknownCamera(ip + ": camera_id " + std::to_string(in.camera_id) + " is not in 'cameras'");
        }
        c.inputs.push_back(in);
    }
    c.output = optional<std::string>(j, "output", "", c.output);
    c.ground_truth = optional<std::string>(j, "ground_truth", "", "");
    c.evaluation = matching_params_from_json(j.contains("evaluation") ? j.at("evaluation") : Json(), "evaluation");
    c.px_per_meter = optional(j, "px_per_meter", "", c.px_per_meter);
    if (!(c.px_per_meter > 0)) throw ConfigError("field 'px_per_meter' must be > 0");
    return c;
}

Json to_json(const RunConfig& c) {
    Json j;
    j["fusion"] = to_json(c.fusion);
    Json cams = Json::array();
    for (const auto& [id, cam] : c.cameras) cams.push_back(to_json(cam));
    j["cameras"] = cams;
    Json inputs = Json::array();
    for (const auto& in : c.inputs) {
        Json e = {{"camera_id", in.camera_id}, {"tracklets", in.tracklets}};
        if (!in.features.empty()) e["features"] = in.features;
        inputs.push_back(e);
    }
    j["inputs"] = inputs;
    j["output"] = c.output;
    if (!c.ground_truth.empty()) j["ground_truth"] = c.ground_truth;
    j["evaluation"] = to_json(c.evaluation);
    j["px_per_meter"] = c.px_per_meter;
    return j;
}

RunConfig load_run_config(const std::string& path) {
    const Json j = load_json_file(path);
    const std::string base = fs::path(path).parent_path().string();
    try {
        return run_config_from_json(j, base.empty() ? "." : base);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::vector<Tracklet> load_inputs(const RunConfig& cfg) {
    std::vector<Tracklet> all;
    for (const auto& in : cfg.inputs) {
        auto tracklets = io::read_tracklets_file(cfg.resolve(in.tracklets), in.camera_id);
        if (!in.features.empty()) io::attach_features(tracklets, io::read_features_file(cfg.resolve(in.features)));
        all.insert(all.end(), std::make_move_iterator(tracklets.begin()), std::make_move_iterator(tracklets.end()));
    }
    return all;
}

}  // namespace mcfuse
