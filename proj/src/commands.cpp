// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcfuse/commands.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "mcfuse/ablation.hpp"
#include "mcfuse/config.hpp"
#include "mcfuse/errors.hpp"
#include "mcfuse/export.hpp"
#include "mcfuse/io.hpp"
#include "mcfuse/manifest.hpp"
#include "mcfuse/simulator.hpp"

namespace mcfuse {

namespace fs = std::filesystem;

namespace {

std::string join_dir(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

FusionConfig fusion_section(const Json& j) {
    return fusion_config_from_json(j.contains("fusion") ? j.at("fusion") : Json(), "fusion");
}

MatchingParams evaluation_section(const Json& j) {
    return matching_params_from_json(j.contains("evaluation") ? j.at("evaluation") : Json(), "evaluation");
}

template <typename F>
auto with_source(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    const auto parse_one = [&](const std::string& s) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
            throw ConfigError("invalid seed '" + s + "' in '" + text + "'");
        }
        return v;
    };
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            seeds.push_back(parse_one(item));
            continue;
        }
        const auto lo = parse_one(item.substr(0, dash));
        const auto hi = parse_one(item.substr(dash + 1));
        if (hi < lo) throw ConfigError("empty seed range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw ConfigError("no seeds given");
    return seeds;
}

std::vector<std::string> cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
    const Json j = load_json_file(opt.config);
    sim::ScenarioConfig cfg = with_source(opt.config, [&] { return scenario_from_json(j); });
    FusionConfig fusion = with_source(opt.config, [&] { return fusion_section(j); });
    if (opt.seed) cfg.world.seed = *opt.seed;
    if (opt.coordinate_mode) fusion.coordinate_mode = *opt.coordinate_mode;
    if (opt.feature_strategy) fusion.feature_strategy = *opt.feature_strategy;

    const sim::Scenario scenario = sim::simulate(cfg);

    RunManifest m;
    m.command = "simulate";
    m.config_path = opt.config;
    m.config_hash = hash_file(opt.config);
    m.outputs = {opt.out_dir};
    m.coordinate_mode = to_string(fusion.coordinate_mode);
    m.feature_strategy = to_string(fusion.feature_strategy);
    m.seeds = {cfg.world.seed};
    const auto written = export_scenario(scenario, cfg, fusion, opt.out_dir, m);

    std::size_t n_tracklets = 0, n_detections = 0;
    for (const auto& obs : scenario.observations) {
        n_tracklets += obs.tracklets.size();
        for (const auto& t : obs.tracklets) n_detections += t.detections.size();
    }
    log << "simulated " << cfg.world.n_workers << " workers, " << cfg.world.n_frames << " frames, "
        << scenario.observations.size() << " cameras: " << n_tracklets << " tracklets, " << n_detections
        << " detections, " << count_points(scenario.world.truth()) << " ground-truth rows\n";
    log << "wrote " << written.size() << " files to " << opt.out_dir << "\n";
    return written;
}

std::vector<std::string> cmd_fuse(const FuseOptions& opt, std::ostream& log) {
    RunConfig cfg = load_run_config(opt.config);
    if (opt.coordinate_mode) cfg.fusion.coordinate_mode = *opt.coordinate_mode;
    if (opt.feature_strategy) cfg.fusion.feature_strategy = *opt.feature_strategy;
    const std::string out = opt.out ? *opt.out : cfg.resolve(cfg.output);

    const auto tracklets = load_inputs(cfg);
    const auto tracks = fuse(tracklets, cfg.cameras, cfg.fusion);

    RunManifest m;
    m.command = "fuse";
    m.config_path = opt.config;
    m.config_hash = hash_file(opt.config);
    for (const auto& in : cfg.inputs) {
        m.inputs.push_back(in.tracklets);
        if (!in.features.empty()) m.inputs.push_back(in.features);
    }
    m.outputs = {out};
    m.coordinate_mode = to_string(cfg.fusion.coordinate_mode);
    m.feature_strategy = to_string(cfg.fusion.feature_strategy);

    std::ostringstream ss;
    io::write_global_csv(ss, tracks, m.comment_lines());
    write_file_atomic(out, ss.str());
    log << "fused " << tracklets.size() << " tracklets into " << tracks.size() << " global tracks -> " << out
        << "\n";
    return {out};
}

std::string format_report(const EvalReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "HOTA  %7.3f  (DetA %.3f, AssA %.3f)\n"
                  "IDF1  %7.3f  (IDTP %ld, IDFP %ld, IDFN %ld)\n"
                  "MOTA  %7.3f  (FN %ld, FP %ld, IDSW %ld)\n"
                  "GT points %ld, predicted points %ld\n",
                  r.hota, r.deta, r.assa, r.idf1, r.idtp, r.idfp, r.idfn, r.mota, r.fn, r.fp, r.idsw, r.num_gt,
                  r.num_pred);
    return buf;
}

std::vector<std::string> cmd_eval(const EvalOptions& opt, std::ostream& log) {
    MatchingParams params;
    if (opt.config) {
        const Json j = load_json_file(*opt.config);
        params = with_source(*opt.config, [&] { return evaluation_section(j); });
    }
    const auto gt = io::read_global_file(opt.ground_truth);
    const auto pred = io::read_global_file(opt.prediction);
    const EvalReport r = evaluate(gt, pred, params);

    RunManifest m;
    m.command = "eval";
    if (opt.config) {
        m.config_path = *opt.config;
        m.config_hash = hash_file(*opt.config);
    }
    m.inputs = {opt.ground_truth, opt.prediction};
    const std::string json_path = join_dir(opt.out_dir, "report.json");
    const std::string text_path = join_dir(opt.out_dir, "report.txt");
    m.outputs = {json_path, text_path};

    Json j;
    j["hota"] = r.hota;
    j["idf1"] = r.idf1;
    j["mota"] = r.mota;
    j["deta"] = r.deta;
    j["assa"] = r.assa;
    j["fp"] = r.fp;
    j["fn"] = r.fn;
    j["idsw"] = r.idsw;
    j["idtp"] = r.idtp;
    j["idfp"] = r.idfp;
    j["idfn"] = r.idfn;
    j["num_gt"] = r.num_gt;
    j["num_pred"] = r.num_pred;
    Json alphas = Json::array();
    for (const auto& [alpha, value] : r.per_alpha) alphas.push_back({{"alpha", alpha}, {"hota", value}});
    j["hota_per_alpha"] = alphas;
    j["manifest"] = to_json(m);

    const std::string text = format_report(r);
    std::string text_file;
    for (const auto& line : m.comment_lines()) text_file += line + "\n";
    text_file += text;
    write_file_atomic(json_path, j.dump(2) + "\n");
    write_file_atomic(text_path, text_file);
    log << text;
    return {json_path, text_path};
}

std::vector<std::string> cmd_ablation(const AblationOptions& opt, std::ostream& log) {
    if (opt.seeds.empty()) throw ConfigError("ablation needs at least one seed");
    const Json j = load_json_file(opt.config);
    const sim::ScenarioConfig cfg = with_source(opt.config, [&] { return scenario_from_json(j); });
    const FusionConfig fusion = with_source(opt.config, [&] { return fusion_section(j); });
    const MatchingParams params = with_source(opt.config, [&] { return evaluation_section(j); });

    const AblationResult result = run_ablation(cfg, fusion, opt.seeds, params);

    RunManifest m;
    m.command = "ablation";
    m.config_path = opt.config;
    m.config_hash = hash_file(opt.config);
    const std::string csv_path = join_dir(opt.out_dir, "ablation.csv");
    const std::string text_path = join_dir(opt.out_dir, "ablation.txt");
    m.outputs = {csv_path, text_path};
    m.coordinate_mode = "all";
    m.feature_strategy = "all";
    m.seeds = opt.seeds;

    const std::string table = ablation_table(result, m);
    write_file_atomic(csv_path, ablation_csv(result, m));
    write_file_atomic(text_path, table);
    log << table;
    return {csv_path, text_path};
}

}  // namespace mcfuse
