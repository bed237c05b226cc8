#include "netfit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netfit/parallel.hpp"
#include "netfit/rng.hpp"
#include "netfit/stats.hpp"

namespace netfit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace_step(double first, double last, double step) {
    std::vector<double> values;
    for (int i = 0;; ++i) {
        double v = first + i * step;
        if (v > last + step / 2) break;
        values.push_back(v);
    }
    return values;
}

}  // namespace

std::uint64_t model_tag(ModelId id) { return fnv1a(model_name(id)); }

std::size_t ParamGrid::point_count() const {
    std::size_t count = 1;
    for (const auto& axis : axes) {
        if (axis.values.empty()) throw std::invalid_argument("empty grid axis: " + axis.name);
        count *= axis.values.size();
    }
    return count;
}

std::vector<double> ParamGrid::point_values(std::size_t index) const {
    std::vector<double> values(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        std::size_t len = axes[a].values.size();
        values[a] = axes[a].values[index % len];
        index /= len;
    }
    return values;
}

ParamGrid default_grid(ModelId id, std::uint64_t base_seed, int replicates) {
    ParamGrid grid;
    grid.model_id = id;
    grid.replicates = replicates;
    grid.base_seed = base_seed;
    switch (id) {
        case ModelId::CBA: {
            std::vector<double> m;
            for (int i = 1; i <= 10; ++i) m.push_back(i);
            std::vector<double> p;
            for (int i = 0; i <= 10; ++i) p.push_back(i / 10.0);
            grid.axes = {{"m", std::move(m)}, {"p", std::move(p)}};
            break;
        }
        case ModelId::FF:
            grid.axes = {{"burn_p", linspace_step(0.05, 0.5, 0.025)}};
            break;
        case ModelId::SBM: {
            std::vector<double> b;
            for (int i = 1; i <= 25; ++i) b.push_back(i);
            grid.axes = {{"B", std::move(b)}};
            break;
        }
        case ModelId::TWO_K:
            break;  // parameterless single point
    }
    return grid;
}

ModelParams params_at(const ParamGrid& grid, std::size_t index, int n_target) {
    ModelParams params;
    params.model_id = grid.model_id;
    params.n_target = n_target;
    auto values = grid.point_values(index);
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
        const std::string& name = grid.axes[a].name;
        double v = values[a];
        if (name == "m") params.cba_m = static_cast<int>(std::lround(v));
        else if (name == "p") params.cba_p = v;
        else if (name == "burn_p") params.ff_burn_p = v;
        else if (name == "B") params.sbm_blocks = static_cast<int>(std::lround(v));
        else throw std::invalid_argument("unknown grid axis: " + name);
    }
    return params;
}

GraphGenerator prepare_generator(const Graph& target, const ModelParams& params) {
    const int n = params.n_target > 0 ? params.n_target : target.node_count();
    switch (params.model_id) {
        case ModelId::CBA: {
            int m = params.cba_m;
            double p = params.cba_p;
            return [n, m, p](std::uint64_t seed) { return generate_cba(n, m, p, seed); };
        }
        case ModelId::FF: {
            double burn = params.ff_burn_p;
            return [n, burn](std::uint64_t seed) { return generate_ff(n, burn, seed); };
        }
        case ModelId::SBM: {
            auto partition = fit_sbm_partition(target, params.sbm_blocks);
            return [partition = std::move(partition)](std::uint64_t seed) {
                return sample_dcsbm(partition, seed);
            };
        }
        case ModelId::TWO_K: {
            auto jdm = extract_jdm(target);
            return [jdm = std::move(jdm)](std::uint64_t seed) { return construct_2k(jdm, seed); };
        }
    }
    throw std::invalid_argument("unknown model id");
}

bool PointEvaluation::usable() const { return std::isfinite(mean_distance); }

PointEvaluation evaluate_point_with(const GraphGenerator& generate,
                                    std::span<const double> target_vec,
                                    std::span<const std::string> selection, int replicates,
                                    std::uint64_t point_seed, const MetricOptions& opt) {
    if (replicates < 1) throw std::invalid_argument("need at least one replicate");
    if (target_vec.size() != selection.size())
        throw std::invalid_argument("target vector does not match the selection");

    PointEvaluation pe;
    pe.replicate_distances.assign(static_cast<std::size_t>(replicates), kNaN);
    double sum = 0.0;
    int ok = 0;
    for (int r = 0; r < replicates; ++r) {
        std::uint64_t seed = derive_seed(point_seed, static_cast<std::uint64_t>(r));
        try {
            Graph g = generate(seed);
            auto vec = project(metric_vector(g, opt), selection);
            auto res = canberra(vec, target_vec);
            pe.replicate_distances[static_cast<std::size_t>(r)] = res.distance;
            pe.masked_slots += res.skipped;
            sum += res.distance;
            ++ok;
        } catch (const std::exception& ex) {
            ++pe.failures;
            if (pe.error.empty()) pe.error = ex.what();
        }
    }
    pe.mean_distance = ok > 0 ? sum / ok : kNaN;
    return pe;
}

double evaluate_point(const Graph& target, const ModelParams& params,
                      std::span<const double> target_vec,
                      std::span<const std::string> selection, int replicates,
                      std::uint64_t point_seed, const MetricOptions& opt) {
    auto generate = prepare_generator(target, params);
    auto pe = evaluate_point_with(generate, target_vec, selection, replicates, point_seed, opt);
    if (!pe.usable())
        throw std::runtime_error("every replicate failed: " + pe.error);
    return pe.mean_distance;
}

CalibrationResult grid_search(const Graph& target, const ParamGrid& grid,
                              const MetricSelection& selection, const MetricOptions& opt,
                              int jobs, const PrepareFn& prepare) {
    if (target.node_count() < 3) throw std::invalid_argument("target needs at least 3 nodes");
    validate_selection(selection);
    if (grid.replicates < 1) throw std::invalid_argument("need at least one replicate");

    const PrepareFn prep = prepare
        ? prepare
        : PrepareFn([](const Graph& t, const ModelParams& p) { return prepare_generator(t, p); });

    auto target_vec = project(metric_vector(target, opt), selection);
    const std::size_t count = grid.point_count();
    const int n_target = target.node_count();

    CalibrationResult result;
    result.model_id = grid.model_id;
    for (const auto& axis : grid.axes) result.axis_names.push_back(axis.name);
    result.points.resize(count);

    parallel_for(count, jobs, [&](std::size_t i) {
        std::uint64_t point_seed = derive_seed(grid.base_seed, model_tag(grid.model_id), i);
        PointEvaluation pe;
        try {
            auto params = params_at(grid, i, n_target);
            auto generate = prep(target, params);
            pe = evaluate_point_with(generate, target_vec, selection, grid.replicates,
                                     point_seed, opt);
        } catch (const std::exception& ex) {
            pe.replicate_distances.assign(static_cast<std::size_t>(grid.replicates), kNaN);
            pe.mean_distance = kNaN;
            pe.failures = grid.replicates;
            pe.error = ex.what();
        }
        pe.index = i;
        pe.axis_values = grid.point_values(i);
        result.points[i] = std::move(pe);
    });

    std::size_t best = count;
    for (std::size_t i = 0; i < count; ++i) {
        if (!result.points[i].usable()) continue;
        if (best == count || result.points[i].mean_distance < result.points[best].mean_distance)
            best = i;
    }
    if (best == count) {
        std::string detail;
        for (const auto& p : result.points)
            if (!p.error.empty()) {
                detail = p.error;
                break;
            }
        throw std::runtime_error("every grid point failed: " + detail);
    }

    result.best_index = best;
    result.best_distance = result.points[best].mean_distance;
    result.best_params = params_at(grid, best, n_target);

    auto generate = prep(target, result.best_params);
    std::uint64_t point_seed = derive_seed(grid.base_seed, model_tag(grid.model_id), best);
    std::uint64_t seed = derive_seed(grid.base_seed, model_tag(grid.model_id), kCounterpartTag);
    bool made = false;
    try {
        result.counterpart = generate(seed);
        made = true;
    } catch (const std::runtime_error&) {
        // fall back to a seed that is known to have generated successfully
    }
    if (!made) {
        const auto& dists = result.points[best].replicate_distances;
        for (std::size_t r = 0; r < dists.size(); ++r) {
            if (std::isfinite(dists[r])) {
                seed = derive_seed(point_seed, static_cast<std::uint64_t>(r));
                result.counterpart = generate(seed);
                made = true;
                break;
            }
        }
    }
    if (!made) throw std::runtime_error("could not regenerate the calibrated counterpart");

    result.counterpart_seed = seed;
    result.best_params.seed = seed;
    result.counterpart_metrics = metric_vector(result.counterpart, opt);
    return result;
}

namespace {

std::vector<std::string> augmented_selection(std::span<const std::string> selection,
                                             bool include_edges) {
    std::vector<std::string> names(selection.begin(), selection.end());
    auto add = [&](const char* name) {
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    };
    add("num_nodes");
    if (include_edges) add("num_edges");
    return names;
}

}  // namespace

double evaluation_distance(const MetricVector& real, const MetricVector& counterpart,
                           std::span<const std::string> selection, bool include_edges) {
    auto names = augmented_selection(selection, include_edges);
    return canberra(project(real, names), project(counterpart, names)).distance;
}

double evaluation_distance(const Graph& real, const Graph& counterpart,
                           std::span<const std::string> selection, bool include_edges,
                           const MetricOptions& opt) {
    const Graph* cp = &counterpart;
    Graph reduced;
    if (!is_connected(counterpart)) {
        reduced = largest_connected_component(counterpart);
        cp = &reduced;
    }
    return evaluation_distance(metric_vector(real, opt), metric_vector(*cp, opt), selection,
                               include_edges);
}

}  // namespace netfit
