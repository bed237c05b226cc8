#include "netfit/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "netfit/io.hpp"
#include "netfit/parallel.hpp"
#include "netfit/rng.hpp"

namespace netfit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

bool safe_name(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-'))
            return false;
    return true;
}

void set_metric(MetricVector& mv, std::string_view name, double value) {
    if (name == "assortativity") {
        if (std::isnan(value)) mv.assortativity.reset();
        else mv.assortativity = value;
    } else if (name == "avg_clust") mv.avg_clust = value;
    else if (name == "avg_deg") mv.avg_deg = value;
    else if (name == "avg_path_log") mv.avg_path_log = value;
    else if (name == "density") mv.density = value;
    else if (name == "glob_clust") mv.glob_clust = value;
    else if (name == "idp_1") mv.idp_1 = value;
    else if (name == "idp_2") mv.idp_2 = value;
    else if (name == "idp_3") mv.idp_3 = value;
    else if (name == "idp_4") mv.idp_4 = value;
    else if (name == "max_deg") mv.max_deg = value;
    else if (name == "max_deg_n") mv.max_deg_n = value;
    else if (name == "max_ebc") mv.max_ebc = value;
    else if (name == "max_eigen") mv.max_eigen = value;
    else if (name == "max_vbc") mv.max_vbc = value;
    else if (name == "p_diam_log") mv.p_diam_log = value;
    else if (name == "num_nodes") mv.num_nodes = value;
    else if (name == "num_edges") mv.num_edges = value;
    else throw std::invalid_argument("unknown metric name: " + std::string(name));
}

json metrics_to_json(const MetricVector& mv) {
    json out = json::object();
    for (auto name : kMetricNames) out[std::string(name)] = mv.value(name);
    return out;  // NaN slots serialize as null
}

MetricVector metrics_from_json(const json& j) {
    MetricVector mv;
    for (auto name : kMetricNames) {
        const auto& v = j.at(std::string(name));
        set_metric(mv, name, v.is_null() ? kNaN : v.get<double>());
    }
    return mv;
}

json params_to_json(const ModelParams& p) {
    json out = json::object();
    out["n"] = p.n_target;
    switch (p.model_id) {
        case ModelId::CBA:
            out["m"] = p.cba_m;
            out["p"] = p.cba_p;
            break;
        case ModelId::FF:
            out["burn_p"] = p.ff_burn_p;
            break;
        case ModelId::SBM:
            out["B"] = p.sbm_blocks;
            break;
        case ModelId::TWO_K:
            break;
    }
    return out;
}

std::string metrics_header() {
    std::vector<std::string> fields{"network", "domain"};
    for (auto name : kMetricNames) fields.emplace_back(name);
    return join_csv(fields);
}

std::string pair_stem(const std::string& network, ModelId model) {
    return network + "__" + std::string(model_name(model));
}

}  // namespace

const std::vector<std::string> kDefaultSelection{
    "assortativity", "avg_clust", "avg_deg", "idp_1",
    "idp_3",         "idp_4",     "max_deg_n", "p_diam_log"};

CorpusManifest load_manifest(const std::string& path) {
    std::istringstream in(read_text_file(path));
    const fs::path base = fs::path(path).parent_path();

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty manifest: " + path);
    if (trim(line) != "path,name,domain")
        throw std::runtime_error("manifest must start with header path,name,domain");

    CorpusManifest manifest;
    std::set<std::string> names;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv(trim(line));
        if (fields.size() != 3)
            throw std::runtime_error("manifest line " + std::to_string(line_no) +
                                     ": expected 3 fields");
        ManifestEntry entry{trim(fields[0]), trim(fields[1]), trim(fields[2])};
        if (entry.path.empty())
            throw std::runtime_error("manifest line " + std::to_string(line_no) + ": empty path");
        if (!safe_name(entry.name))
            throw std::runtime_error("manifest line " + std::to_string(line_no) +
                                     ": network name must use [A-Za-z0-9._-]");
        if (!is_domain(entry.domain))
            throw std::runtime_error("manifest line " + std::to_string(line_no) +
                                     ": unknown domain " + entry.domain);
        if (!names.insert(entry.name).second)
            throw std::runtime_error("duplicate network name: " + entry.name);
        fs::path p(entry.path);
        if (!p.is_absolute()) entry.path = (base / p).string();
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

std::vector<ModelId> parse_model_list(const std::string& text) {
    auto items = split_list(text);
    if (items.empty()) throw std::invalid_argument("empty model list");
    std::set<ModelId> wanted;
    for (const auto& item : items) wanted.insert(model_from_name(item));
    std::vector<ModelId> models;
    for (ModelId id : kAllModels)
        if (wanted.count(id)) models.push_back(id);
    return models;
}

void apply_config_line(RunConfig& config, const std::string& key, const std::string& value) {
    try {
        if (key == "threshold") {
            config.threshold = parse_double(value);
            if (config.threshold < 0.0 || config.threshold > 1.0)
                throw std::invalid_argument("outside [0,1]");
        } else if (key == "replicates") {
            config.replicates = std::stoi(value);
            if (config.replicates < 1) throw std::invalid_argument("must be >= 1");
        } else if (key == "base_seed") {
            config.base_seed = std::stoull(value);
        } else if (key == "jobs") {
            config.jobs = std::stoi(value);
            if (config.jobs < 1) throw std::invalid_argument("must be >= 1");
        } else if (key == "models") {
            config.models = parse_model_list(value);
        } else if (key == "selection") {
            config.selection = split_list(value);
            validate_selection(config.selection);
        } else if (key == "cba_m_grid" || key == "cba_p_grid" || key == "ff_burn_grid" ||
                   key == "sbm_block_grid") {
            std::vector<double> values;
            for (const auto& item : split_list(value)) values.push_back(parse_double(item));
            if (values.empty()) throw std::invalid_argument("empty grid");
            if (key == "cba_p_grid" || key == "ff_burn_grid")
                for (double v : values)
                    if (v < 0.0 || v > 1.0) throw std::invalid_argument("probability outside [0,1]");
            if (key == "cba_m_grid") config.cba_m_grid = std::move(values);
            else if (key == "cba_p_grid") config.cba_p_grid = std::move(values);
            else if (key == "ff_burn_grid") config.ff_burn_grid = std::move(values);
            else config.sbm_block_grid = std::move(values);
        } else if (key == "path_exact_cutoff") {
            config.path_exact_cutoff = std::stoi(value);
            if (config.path_exact_cutoff < 0) throw std::invalid_argument("must be >= 0");
        } else if (key == "path_samples") {
            config.path_samples = std::stoi(value);
            if (config.path_samples < 1) throw std::invalid_argument("must be >= 1");
        } else if (key == "eval_include_edges") {
            if (value == "true" || value == "1") config.eval_include_edges = true;
            else if (value == "false" || value == "0") config.eval_include_edges = false;
            else throw std::invalid_argument("expected true or false");
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    } catch (const std::invalid_argument& ex) {
        std::string what = ex.what();
        if (what.find(key) != std::string::npos) throw;
        throw std::invalid_argument("config key " + key + " = " + value + ": " + what);
    } catch (const std::exception& ex) {
        throw std::invalid_argument("config key " + key + " = " + value + ": " + ex.what());
    }
}

RunConfig load_config(const std::string& path) {
    RunConfig config;
    std::istringstream in(read_text_file(path));
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

MetricOptions metric_options(const RunConfig& config, int jobs) {
    MetricOptions opt;
    opt.path.exact_cutoff = config.path_exact_cutoff;
    opt.path.sample_sources = config.path_samples;
    opt.jobs = jobs;
    return opt;
}

std::vector<std::string> resolve_selection(const RunConfig& config, const std::string& out_dir) {
    if (!config.selection.empty()) {
        validate_selection(config.selection);
        return config.selection;
    }
    fs::path file = fs::path(out_dir) / "selection.txt";
    if (fs::exists(file)) {
        std::istringstream in(read_text_file(file.string()));
        std::vector<std::string> selection;
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (!line.empty()) selection.push_back(line);
        }
        validate_selection(selection);
        return selection;
    }
    return kDefaultSelection;
}

int run_metrics(const CorpusManifest& manifest, const RunConfig& config,
                const std::string& out_dir) {
    if (manifest.entries.empty()) throw std::runtime_error("manifest has no entries");
    fs::create_directories(out_dir);

    struct Row {
        bool ok = false;
        MetricVector mv;
        std::string error;
    };
    std::vector<Row> rows(manifest.entries.size());
    parallel_for(manifest.entries.size(), config.jobs, [&](std::size_t i) {
        try {
            auto parsed = parse_edge_list_file(manifest.entries[i].path);
            rows[i].mv = metric_vector(parsed.graph, metric_options(config, 1));
            rows[i].ok = true;
        } catch (const std::exception& ex) {
            rows[i].error = ex.what();
        }
    });

    std::string csv = metrics_header() + "\n";
    int successes = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].ok) {
            std::cerr << "warning: skipping " << manifest.entries[i].name << ": "
                      << rows[i].error << "\n";
            continue;
        }
        std::vector<std::string> fields{manifest.entries[i].name, manifest.entries[i].domain};
        for (auto name : kMetricNames) fields.push_back(format_double(rows[i].mv.value(name)));
        csv += join_csv(fields) + "\n";
        ++successes;
    }
    if (successes == 0) throw std::runtime_error("no network in the manifest could be processed");
    write_text_file((fs::path(out_dir) / "metrics.csv").string(), csv);
    return successes;
}

namespace {

struct NamedTable {
    std::vector<std::string> networks;
    MetricTable table;
};

NamedTable read_metric_table(const std::string& out_dir) {
    fs::path file = fs::path(out_dir) / "metrics.csv";
    if (!fs::exists(file))
        throw std::runtime_error("metrics.csv not found in " + out_dir + "; run metrics first");
    std::istringstream in(read_text_file(file.string()));
    std::string line;
    if (!std::getline(in, line) || trim(line) != metrics_header())
        throw std::runtime_error("unexpected metrics.csv header");

    NamedTable out;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv(trim(line));
        if (fields.size() != 2 + kMetricNames.size())
            throw std::runtime_error("metrics.csv line " + std::to_string(line_no) +
                                     ": wrong column count");
        MetricVector mv;
        for (std::size_t k = 0; k < kMetricNames.size(); ++k)
            set_metric(mv, kMetricNames[k], parse_double(fields[2 + k]));
        out.networks.push_back(fields[0]);
        out.table.rows.push_back(mv);
        out.table.domains.push_back(fields[1]);
    }
    if (out.networks.empty()) throw std::runtime_error("metrics.csv has no rows");
    return out;
}

}  // namespace

void run_selection(const RunConfig& config, const std::string& out_dir) {
    auto named = read_metric_table(out_dir);
    auto matrix = domain_avg_correlation(named.table);
    auto network = build_correlation_network(matrix, config.threshold);

    std::string edges_csv = "metric_a,metric_b,weight\n";
    for (const auto& link : network.links) {
        edges_csv += join_csv({network.nodes[link.a], network.nodes[link.b],
                               format_double(link.weight)}) +
                     "\n";
    }
    write_text_file((fs::path(out_dir) / "correlation_edges.csv").string(), edges_csv);

    auto selection = select_metrics(network);
    std::string text;
    for (const auto& name : selection) text += name + "\n";
    write_text_file((fs::path(out_dir) / "selection.txt").string(), text);
}

namespace {

ParamGrid config_grid(const RunConfig& config, ModelId id, std::uint64_t base_seed) {
    ParamGrid grid = default_grid(id, base_seed, config.replicates);
    switch (id) {
        case ModelId::CBA:
            if (!config.cba_m_grid.empty()) grid.axes[0].values = config.cba_m_grid;
            if (!config.cba_p_grid.empty()) grid.axes[1].values = config.cba_p_grid;
            break;
        case ModelId::FF:
            if (!config.ff_burn_grid.empty()) grid.axes[0].values = config.ff_burn_grid;
            break;
        case ModelId::SBM:
            if (!config.sbm_block_grid.empty()) grid.axes[0].values = config.sbm_block_grid;
            break;
        case ModelId::TWO_K:
            break;
    }
    return grid;
}

std::string ledger_csv(const CalibrationResult& result) {
    std::vector<std::string> header{"point_index"};
    for (const auto& name : result.axis_names) header.push_back(name);
    header.insert(header.end(), {"mean_distance", "masked_slots", "failures",
                                 "replicate_distances"});
    std::string csv = join_csv(header) + "\n";
    for (const auto& point : result.points) {
        std::vector<std::string> fields{std::to_string(point.index)};
        for (double v : point.axis_values) fields.push_back(format_double(v));
        fields.push_back(format_double(point.mean_distance));
        fields.push_back(std::to_string(point.masked_slots));
        fields.push_back(std::to_string(point.failures));
        std::string reps;
        for (std::size_t r = 0; r < point.replicate_distances.size(); ++r) {
            if (r) reps += ';';
            reps += format_double(point.replicate_distances[r]);
        }
        fields.push_back(reps);
        csv += join_csv(fields) + "\n";
    }
    return csv;
}

}  // namespace

int run_calibration(const CorpusManifest& manifest, const RunConfig& config,
                    const std::string& out_dir) {
    if (manifest.entries.empty()) throw std::runtime_error("manifest has no entries");
    fs::create_directories(fs::path(out_dir) / "calibration");
    fs::create_directories(fs::path(out_dir) / "counterparts");
    auto selection = resolve_selection(config, out_dir);
    const MetricOptions opt = metric_options(config, 1);

    int successes = 0;
    for (const auto& entry : manifest.entries) {
        Graph target;
        try {
            target = parse_edge_list_file(entry.path).graph;
        } catch (const std::exception& ex) {
            std::cerr << "warning: skipping " << entry.name << ": " << ex.what() << "\n";
            continue;
        }
        const std::uint64_t network_seed = derive_seed(config.base_seed, fnv1a(entry.name));

        for (ModelId model : config.models) {
            const std::string stem = pair_stem(entry.name, model);
            const fs::path meta_path = fs::path(out_dir) / "calibration" / (stem + ".json");
            try {
                auto grid = config_grid(config, model, network_seed);
                auto result = grid_search(target, grid, selection, opt, config.jobs);

                // report-stage evaluation works on the largest component
                const Graph* eval_graph = &result.counterpart;
                Graph reduced;
                if (!is_connected(result.counterpart)) {
                    reduced = largest_connected_component(result.counterpart);
                    eval_graph = &reduced;
                }
                MetricVector eval_mv = eval_graph == &result.counterpart
                    ? result.counterpart_metrics
                    : metric_vector(*eval_graph, opt);

                json meta;
                meta["network"] = entry.name;
                meta["domain"] = entry.domain;
                meta["model"] = std::string(model_name(model));
                meta["selection"] = selection;
                meta["replicates"] = config.replicates;
                meta["base_seed"] = network_seed;
                meta["best"] = {{"index", result.best_index},
                                {"distance", result.best_distance},
                                {"params", params_to_json(result.best_params)},
                                {"seed", result.counterpart_seed}};
                meta["counterpart_metrics"] = metrics_to_json(result.counterpart_metrics);
                meta["evaluation_metrics"] = metrics_to_json(eval_mv);
                write_text_file(meta_path.string(), meta.dump(2) + "\n");
                write_text_file((fs::path(out_dir) / "calibration" / (stem + ".csv")).string(),
                                ledger_csv(result));

                std::ostringstream edge_text;
                write_edge_list(edge_text, result.counterpart);
                write_text_file((fs::path(out_dir) / "counterparts" / (stem + ".txt")).string(),
                                edge_text.str());
                json sidecar;
                sidecar["model"] = std::string(model_name(model));
                sidecar["params"] = params_to_json(result.best_params);
                sidecar["seed"] = result.counterpart_seed;
                write_text_file((fs::path(out_dir) / "counterparts" / (stem + ".json")).string(),
                                sidecar.dump(2) + "\n");
                ++successes;
            } catch (const std::exception& ex) {
                std::cerr << "warning: calibration failed for " << entry.name << " x "
                          << model_name(model) << ": " << ex.what() << "\n";
                json meta;
                meta["network"] = entry.name;
                meta["domain"] = entry.domain;
                meta["model"] = std::string(model_name(model));
                meta["error"] = std::string(ex.what());
                write_text_file(meta_path.string(), meta.dump(2) + "\n");
            }
        }
    }
    if (successes == 0) throw std::runtime_error("no network/model pair could be calibrated");
    return successes;
}

void run_report(const CorpusManifest& manifest, const RunConfig& config,
                const std::string& out_dir) {
    auto named = read_metric_table(out_dir);
    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < named.networks.size(); ++i) row_of[named.networks[i]] = i;
    auto selection = resolve_selection(config, out_dir);

    struct PairResult {
        std::string network;
        std::string domain;
        ModelId model = ModelId::CBA;
        MetricVector eval_mv;
    };
    std::vector<PairResult> pairs;
    for (const auto& entry : manifest.entries) {
        if (!row_of.count(entry.name)) continue;
        for (ModelId model : config.models) {
            fs::path meta_path =
                fs::path(out_dir) / "calibration" / (pair_stem(entry.name, model) + ".json");
            if (!fs::exists(meta_path)) continue;
            json meta = json::parse(read_text_file(meta_path.string()));
            if (meta.contains("error")) continue;
            pairs.push_back(
                {entry.name, entry.domain, model, metrics_from_json(meta.at("evaluation_metrics"))});
        }
    }
    if (pairs.empty())
        throw std::runtime_error("no calibration results found in " + out_dir +
                                 "; run calibrate first");

    // domain x model mean evaluation distances
    {
        std::vector<std::string> header{"domain"};
        for (ModelId model : config.models) header.emplace_back(model_name(model));
        std::string csv = join_csv(header) + "\n";
        for (auto dom : kDomains) {
            bool present = std::any_of(named.table.domains.begin(), named.table.domains.end(),
                                       [&](const std::string& d) { return d == dom; });
            if (!present) continue;
            std::vector<std::string> fields{std::string(dom)};
            for (ModelId model : config.models) {
                double sum = 0.0;
                int count = 0;
                for (const auto& pair : pairs) {
                    if (pair.model != model || pair.domain != dom) continue;
                    const auto& real = named.table.rows[row_of.at(pair.network)];
                    sum += evaluation_distance(real, pair.eval_mv, selection,
                                               config.eval_include_edges);
                    ++count;
                }
                fields.push_back(format_double(count > 0 ? sum / count : kNaN));
            }
            csv += join_csv(fields) + "\n";
        }
        write_text_file((fs::path(out_dir) / "domain_distance.csv").string(), csv);
    }

    // per-network scatter points, real rows first for each network
    {
        const std::array<std::string_view, 4> cols{"avg_clust", "p_diam_log", "max_deg_n",
                                                   "max_eigen"};
        std::string csv = "network,category,avg_clust,p_diam_log,max_deg_n,max_eigen\n";
        auto emit = [&](const std::string& network, std::string_view category,
                        const MetricVector& mv) {
            std::vector<std::string> fields{network, std::string(category)};
            for (auto col : cols) fields.push_back(format_double(mv.value(col)));
            csv += join_csv(fields) + "\n";
        };
        for (const auto& entry : manifest.entries) {
            auto it = row_of.find(entry.name);
            if (it == row_of.end()) continue;
            emit(entry.name, "real", named.table.rows[it->second]);
            for (const auto& pair : pairs)
                if (pair.network == entry.name) emit(entry.name, model_name(pair.model), pair.eval_mv);
        }
        write_text_file((fs::path(out_dir) / "scatter.csv").string(), csv);
    }

    // joint clustering and diameter recovery per model
    {
        std::string csv = "model,counterparts,joint_pass,pass_fraction,mean_joint_score\n";
        for (ModelId model : config.models) {
            int count = 0, passed = 0;
            double score_sum = 0.0;
            for (const auto& pair : pairs) {
                if (pair.model != model) continue;
                const auto& real = named.table.rows[row_of.at(pair.network)];
                auto ratio = [](double real_v, double counterpart_v) {
                    return real_v <= 0.0 ? 1.0 : counterpart_v / real_v;
                };
                double rc = ratio(real.avg_clust, pair.eval_mv.avg_clust);
                double rd = ratio(real.p_diam_log, pair.eval_mv.p_diam_log);
                ++count;
                if (rc >= 0.8 && rd >= 0.8) ++passed;
                score_sum += std::min(rc, rd);
            }
            csv += join_csv({std::string(model_name(model)), std::to_string(count),
                             std::to_string(passed),
                             format_double(count > 0 ? static_cast<double>(passed) / count : kNaN),
                             format_double(count > 0 ? score_sum / count : kNaN)}) +
                   "\n";
        }
        write_text_file((fs::path(out_dir) / "diagnostic.csv").string(), csv);
    }
}

void run_all(const CorpusManifest& manifest, const RunConfig& config, const std::string& out_dir) {
    run_metrics(manifest, config, out_dir);
    run_selection(config, out_dir);
    run_calibration(manifest, config, out_dir);
    run_report(manifest, config, out_dir);
}

}  // namespace netfit
