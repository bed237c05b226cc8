#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netfit/calibration.hpp"
#include "netfit/metrics.hpp"
#include "netfit/stats.hpp"

namespace netfit {

struct ManifestEntry {
    std::string path;
    std::string name;
    std::string domain;
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;
};

// CSV with header path,name,domain.  Relative paths resolve against the
// manifest's directory; names must be unique and filename-safe; domains
// come from the closed label set.
CorpusManifest load_manifest(const std::string& path);

struct RunConfig {
    double threshold = 0.65;
    int replicates = 3;
    std::uint64_t base_seed = 1;
    int jobs = 1;
    std::vector<ModelId> models{kAllModels.begin(), kAllModels.end()};
    std::vector<std::string> selection;  // empty: use selection.txt or the built-in default
    std::vector<double> cba_m_grid;
    std::vector<double> cba_p_grid;
    std::vector<double> ff_burn_grid;
    std::vector<double> sbm_block_grid;
    int path_exact_cutoff = 20000;
    int path_samples = 2000;
    bool eval_include_edges = true;
};

// Flat "key = value" lines, '#' comments; unknown keys are rejected.
RunConfig load_config(const std::string& path);
void apply_config_line(RunConfig& config, const std::string& key, const std::string& value);
std::vector<ModelId> parse_model_list(const std::string& text);

// Fallback calibration selection when no computed or configured one exists.
extern const std::vector<std::string> kDefaultSelection;

MetricOptions metric_options(const RunConfig& config, int jobs);
std::vector<std::string> resolve_selection(const RunConfig& config, const std::string& out_dir);

// Stage entry points.  Partial failures warn and continue; total failure
// throws std::runtime_error.  The int returns count successes.
int run_metrics(const CorpusManifest& manifest, const RunConfig& config,
                const std::string& out_dir);
void run_selection(const RunConfig& config, const std::string& out_dir);
int run_calibration(const CorpusManifest& manifest, const RunConfig& config,
                    const std::string& out_dir);
void run_report(const CorpusManifest& manifest, const RunConfig& config,
                const std::string& out_dir);
void run_all(const CorpusManifest& manifest, const RunConfig& config, const std::string& out_dir);

}  // namespace netfit
