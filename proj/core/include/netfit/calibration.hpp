#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "netfit/generators.hpp"
#include "netfit/metrics.hpp"

namespace netfit {

// Seed-stream tag for the reported counterpart, distinct from every
// replicate index.
inline constexpr std::uint64_t kCounterpartTag = 0x7a3c9b1ef05d8642ULL;

std::uint64_t model_tag(ModelId id);

struct GridAxis {
    std::string name;
    std::vector<double> values;
};

struct ParamGrid {
    ModelId model_id = ModelId::CBA;
    std::vector<GridAxis> axes;  // empty lattice = a single parameterless point
    int replicates = 3;
    std::uint64_t base_seed = 0;

    std::size_t point_count() const;
    // Row-major decode, first axis most significant.
    std::vector<double> point_values(std::size_t index) const;
};

ParamGrid default_grid(ModelId id, std::uint64_t base_seed, int replicates = 3);

// Axis values of the lattice point mapped onto ModelParams fields by axis
// name (m, p, burn_p, B).
ModelParams params_at(const ParamGrid& grid, std::size_t index, int n_target);

using GraphGenerator = std::function<Graph(std::uint64_t seed)>;
using PrepareFn = std::function<GraphGenerator(const Graph& target, const ModelParams& params)>;

// Binds a model to its target: SBM fits its partition once, 2K extracts the
// degree matrix once, CBA/FF close over their parameters.
GraphGenerator prepare_generator(const Graph& target, const ModelParams& params);

struct PointEvaluation {
    std::size_t index = 0;
    std::vector<double> axis_values;
    std::vector<double> replicate_distances;  // NaN where the replicate failed
    double mean_distance = 0.0;               // over successful replicates; NaN if none
    int masked_slots = 0;
    int failures = 0;
    std::string error;  // first failure message

    bool usable() const;
};

PointEvaluation evaluate_point_with(const GraphGenerator& generate,
                                    std::span<const double> target_vec,
                                    std::span<const std::string> selection, int replicates,
                                    std::uint64_t point_seed, const MetricOptions& opt = {});

// Mean replicate distance of one parameter point; throws std::runtime_error
// when every replicate fails.
double evaluate_point(const Graph& target, const ModelParams& params,
                      std::span<const double> target_vec,
                      std::span<const std::string> selection, int replicates,
                      std::uint64_t point_seed, const MetricOptions& opt = {});

struct CalibrationResult {
    ModelId model_id = ModelId::CBA;
    std::vector<std::string> axis_names;
    std::vector<PointEvaluation> points;  // lattice order
    std::size_t best_index = 0;
    ModelParams best_params;
    double best_distance = 0.0;
    std::uint64_t counterpart_seed = 0;
    Graph counterpart;
    MetricVector counterpart_metrics;
};

// Exhaustive lattice search minimizing the mean selected-metric Canberra
// distance to the target; ties fall to the earliest lattice point.  The
// prepare hook exists for tests; pass nullptr for the real models.
CalibrationResult grid_search(const Graph& target, const ParamGrid& grid,
                              const MetricSelection& selection, const MetricOptions& opt = {},
                              int jobs = 1, const PrepareFn& prepare = nullptr);

// Canberra distance over the selection augmented with the size counts; a
// disconnected counterpart is reduced to its largest component first.
double evaluation_distance(const MetricVector& real, const MetricVector& counterpart,
                           std::span<const std::string> selection, bool include_edges = true);
double evaluation_distance(const Graph& real, const Graph& counterpart,
                           std::span<const std::string> selection, bool include_edges = true,
                           const MetricOptions& opt = {});

}  // namespace netfit
