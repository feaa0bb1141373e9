// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mcfuse/appearance.hpp"
#include "mcfuse/commands.hpp"
#include "mcfuse/errors.hpp"
#include "mcfuse/geometry.hpp"
#include "mcfuse/manifest.hpp"

namespace {

struct Overrides {
    std::string coordinate_mode;
    std::string features;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--coordinate-mode", coordinate_mode, "Anchor used for projection")
            ->check(CLI::IsMember({"bbox-center", "foot"}));
        cmd->add_option("--features", features, "Appearance similarity strategy")
            ->check(CLI::IsMember({"none", "mean", "pd-aware"}));
    }
    std::optional<mcfuse::CoordinateMode> mode() const {
        if (coordinate_mode.empty()) return std::nullopt;
        return mcfuse::parse_coordinate_mode(coordinate_mode);
    }
    std::optional<mcfuse::FeatureStrategy> strategy() const {
        if (features.empty()) return std::nullopt;
        return mcfuse::parse_feature_strategy(features);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-camera ground-plane track fusion"};
    app.set_version_flag("--version", std::string("mcfuse ") + mcfuse::kVersion);
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Suppress progress output");

    mcfuse::SimulateOptions sim_opt;
    std::optional<std::uint64_t> sim_seed;
    Overrides sim_over;
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic scenario and export it");
    sim->add_option("-c,--config", sim_opt.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
    sim->add_option("-o,--out", sim_opt.out_dir, "Output directory");
    sim->add_option("-s,--seed", sim_seed, "Override the world seed");
    sim->add_flag("-q,--quiet", quiet, "Suppress progress output");
    sim_over.add_to(sim);

    mcfuse::FuseOptions fuse_opt;
    std::string fuse_out;
    Overrides fuse_over;
    auto* fuse = app.add_subcommand("fuse", "Fuse per-camera tracklets into global tracks");
    fuse->add_option("-c,--config", fuse_opt.config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    fuse->add_option("-o,--out", fuse_out, "Output CSV (default: the config's output)");
    fuse->add_flag("-q,--quiet", quiet, "Suppress progress output");
    fuse_over.add_to(fuse);

    mcfuse::EvalOptions eval_opt;
    std::string eval_config;
    auto* eval = app.add_subcommand("eval", "Score predicted tracks against ground truth");
    eval->add_option("--gt", eval_opt.ground_truth, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("--pred", eval_opt.prediction, "Predicted CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("-c,--config", eval_config, "Config with an evaluation section")->check(CLI::ExistingFile);
    eval->add_option("-o,--out", eval_opt.out_dir, "Output directory for report.json / report.txt");
    eval->add_flag("-q,--quiet", quiet, "Suppress progress output");

    mcfuse::AblationOptions abl_opt;
    std::string abl_seeds = "1";
    auto* abl = app.add_subcommand("ablation", "Run all six coordinate/feature conditions");
    abl->add_option("-c,--config", abl_opt.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
    abl->add_option("-s,--seeds,--seed", abl_seeds, "Seeds, e.g. 1-10 or 3,5,8");
    abl->add_option("-o,--out", abl_opt.out_dir, "Output directory");
    abl->add_flag("-q,--quiet", quiet, "Suppress progress output");

    CLI11_PARSE(app, argc, argv);

    std::ostringstream sink;
    std::ostream& log = quiet ? static_cast<std::ostream&>(sink) : std::cout;
    try {
        if (*sim) {
            sim_opt.seed = sim_seed;
            sim_opt.coordinate_mode = sim_over.mode();
            sim_opt.feature_strategy = sim_over.strategy();
            mcfuse::cmd_simulate(sim_opt, log);
        } else if (*fuse) {
            if (!fuse_out.empty()) fuse_opt.out = fuse_out;
            fuse_opt.coordinate_mode = fuse_over.mode();
            fuse_opt.feature_strategy = fuse_over.strategy();
            mcfuse::cmd_fuse(fuse_opt, log);
        } else if (*eval) {
            if (!eval_config.empty()) eval_opt.config = eval_config;
            mcfuse::cmd_eval(eval_opt, log);
        } else if (*abl) {
            abl_opt.seeds = mcfuse::parse_seed_list(abl_seeds);
            mcfuse::cmd_ablation(abl_opt, log);
        }
    } catch (const mcfuse::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
