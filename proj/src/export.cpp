// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/export.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcfuse/errors.hpp"
#include "mcfuse/io.hpp"

namespace mcfuse {

namespace fs = std::filesystem;

Json to_json(const RunManifest& manifest) {
    Json j = Json::object();
    for (const auto& [k, v] : manifest.fields()) j[k] = v;
    return j;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + target.parent_path().string() + ": " + ec.message());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::vector<std::string> export_scenario(const sim::Scenario& scenario, const sim::ScenarioConfig& cfg,
                                         const FusionConfig& fusion, const std::string& out_dir,
                                         const RunManifest& manifest) {
    std::vector<std::string> written;
    const auto comments = manifest.comment_lines();
    const auto out_path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    {
        std::ostringstream ss;
        io::write_truth_csv(ss, scenario.world.truth(), comments);
        write_file_atomic(out_path("ground_truth.csv"), ss.str());
        written.push_back(out_path("ground_truth.csv"));
    }

    RunConfig run;
    run.fusion = fusion;
    run.cameras = scenario.rig();
    run.ground_truth = "ground_truth.csv";
    run.output = "fused.csv";
    const bool with_features = cfg.noise.feature_dim > 0;
    for (const auto& obs : scenario.observations) {
        const int id = obs.calibrated.camera_id;
        InputSpec in;
        in.camera_id = id;
        in.tracklets = "cam_" + std::to_string(id) + "_tracklets.csv";
        {
            std::ostringstream ss;
            io::write_tracklets_csv(ss, obs.tracklets, comments);
            write_file_atomic(out_path(in.tracklets), ss.str());
            written.push_back(out_path(in.tracklets));
        }
        if (with_features) {
            std::ostringstream ss;
            if (cfg.feature_format == "bin") {
                in.features = "cam_" + std::to_string(id) + "_features.bin";
                io::write_features_bin(ss, obs.tracklets, manifest.to_text());
            } else {
                in.features = "cam_" + std::to_string(id) + "_features.csv";
                io::write_features_csv(ss, obs.tracklets, comments);
            }
            write_file_atomic(out_path(in.features), ss.str());
            written.push_back(out_path(in.features));
        }
        run.inputs.push_back(in);
    }

    Json j = to_json(run);
    j["manifest"] = to_json(manifest);
    write_file_atomic(out_path("run.json"), j.dump(2) + "\n");
    written.push_back(out_path("run.json"));
    return written;
}

}  // namespace mcfuse
