#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "netfit/pipeline.hpp"

namespace {

struct CliArgs {
    std::string manifest;
    std::string config;
    std::string out = "out";
    std::string models;
    std::uint64_t seed = 0;
    double threshold = -1.0;
    int jobs = 0;
    bool seed_set = false;
    bool threshold_set = false;
    bool jobs_set = false;
};

void add_common_flags(CLI::App* cmd, CliArgs& args, bool needs_manifest) {
    auto* manifest =
        cmd->add_option("--manifest", args.manifest, "Corpus manifest CSV (path,name,domain)");
    if (needs_manifest) manifest->required();
    cmd->add_option("--config", args.config, "Run configuration file (key = value lines)");
    cmd->add_option("--out", args.out, "Output directory (default: out)");
    cmd->add_option("--seed", args.seed, "Base seed override")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threshold", args.threshold, "Correlation threshold override in [0,1]")
        ->each([&](const std::string&) { args.threshold_set = true; });
    cmd->add_option("--models", args.models, "Comma-separated model subset (2K,CBA,FF,SBM)");
    cmd->add_option("--jobs", args.jobs, "Worker thread count override")
        ->each([&](const std::string&) { args.jobs_set = true; });
}

netfit::RunConfig build_config(const CliArgs& args) {
    netfit::RunConfig config;
    if (!args.config.empty()) config = netfit::load_config(args.config);
    if (args.seed_set) config.base_seed = args.seed;
    if (args.threshold_set)
        netfit::apply_config_line(config, "threshold", std::to_string(args.threshold));
    if (!args.models.empty()) config.models = netfit::parse_model_list(args.models);
    if (args.jobs_set) {
        if (args.jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
        config.jobs = args.jobs;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structural profiling and generative-model calibration for network corpora"};
    app.require_subcommand(1);

    CliArgs args;
    auto* metrics = app.add_subcommand("metrics", "Profile every network in the manifest");
    auto* select = app.add_subcommand("select", "Pick a non-redundant metric subset");
    auto* calibrate = app.add_subcommand("calibrate", "Fit each model to each network");
    auto* report = app.add_subcommand("report", "Summarize calibration results");
    auto* all = app.add_subcommand("all", "Run the full pipeline");
    add_common_flags(metrics, args, true);
    add_common_flags(select, args, false);
    add_common_flags(calibrate, args, true);
    add_common_flags(report, args, true);
    add_common_flags(all, args, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nRun with --help for usage.\n";
        return 1;
    }

    netfit::RunConfig config;
    netfit::CorpusManifest manifest;
    try {
        config = build_config(args);
        if (!args.manifest.empty()) manifest = netfit::load_manifest(args.manifest);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }

    try {
        if (metrics->parsed()) {
            netfit::run_metrics(manifest, config, args.out);
        } else if (select->parsed()) {
            netfit::run_selection(config, args.out);
        } else if (calibrate->parsed()) {
            netfit::run_calibration(manifest, config, args.out);
        } else if (report->parsed()) {
            netfit::run_report(manifest, config, args.out);
        } else {
            netfit::run_all(manifest, config, args.out);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
