#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netfit/io.hpp"
#include "netfit/pipeline.hpp"

using namespace netfit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("netfit_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& leaf = "") const {
        return leaf.empty() ? path.string() : (path / leaf).string();
    }
};

void write(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    out << text;
}

// five small distinct graphs, all one domain so selection has enough rows
std::string build_corpus(const TempDir& dir) {
    write(dir.path / "nets" / "ring.txt", "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    write(dir.path / "nets" / "wheel.txt",
          "0 1\n1 2\n2 3\n3 0\n0 2\n4 0\n4 1\n4 2\n4 3\n");
    write(dir.path / "nets" / "chain.txt", "0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n");
    write(dir.path / "nets" / "star.txt", "0 1\n0 2\n0 3\n0 4\n0 5\n1 2\n");
    write(dir.path / "nets" / "clique.txt",
          "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n3 4\n4 5\n");
    std::string manifest =
        "path,name,domain\n"
        "nets/ring.txt,ring,friendship\n"
        "nets/wheel.txt,wheel,friendship\n"
        "nets/chain.txt,chain,friendship\n"
        "nets/star.txt,star,friendship\n"
        "nets/clique.txt,clique,friendship\n";
    write(dir.path / "manifest.csv", manifest);
    return (dir.path / "manifest.csv").string();
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            files[fs::relative(entry.path(), root).string()] =
                read_text_file(entry.path().string());
    return files;
}

RunConfig fast_config() {
    RunConfig config;
    config.replicates = 1;
    config.models = {ModelId::TWO_K, ModelId::CBA};
    config.cba_m_grid = {1, 2};
    config.cba_p_grid = {0.0, 0.5};
    return config;
}

}  // namespace

TEST_CASE("manifest parsing resolves paths and validates entries") {
    TempDir dir("manifest");
    write(dir.path / "sub" / "g.txt", "0 1\n1 2\n");
    write(dir.path / "manifest.csv",
          "path,name,domain\n"
          "sub/g.txt,alpha,friendship\n"
          "\n"
          "sub/g.txt,beta,collaboration\n");
    auto manifest = load_manifest(dir.str("manifest.csv"));
    REQUIRE(manifest.entries.size() == 2);
    CHECK(manifest.entries[0].name == "alpha");
    CHECK(fs::path(manifest.entries[0].path).is_absolute());
    CHECK(fs::exists(manifest.entries[0].path));
    CHECK(manifest.entries[1].domain == "collaboration");

    write(dir.path / "bad_header.csv", "file,name,domain\nsub/g.txt,a,friendship\n");
    CHECK_THROWS_AS(load_manifest(dir.str("bad_header.csv")), std::runtime_error);

    write(dir.path / "short_row.csv", "path,name,domain\nsub/g.txt,a\n");
    CHECK_THROWS_AS(load_manifest(dir.str("short_row.csv")), std::runtime_error);

    write(dir.path / "dup.csv",
          "path,name,domain\nsub/g.txt,a,friendship\nsub/g.txt,a,friendship\n");
    CHECK_THROWS_AS(load_manifest(dir.str("dup.csv")), std::runtime_error);

    write(dir.path / "domain.csv", "path,name,domain\nsub/g.txt,a,office\n");
    CHECK_THROWS_AS(load_manifest(dir.str("domain.csv")), std::runtime_error);

    write(dir.path / "name.csv", "path,name,domain\nsub/g.txt,a b,friendship\n");
    CHECK_THROWS_AS(load_manifest(dir.str("name.csv")), std::runtime_error);
}

TEST_CASE("config parsing applies known keys and rejects the rest") {
    TempDir dir("config");
    write(dir.path / "run.conf",
          "# comment line\n"
          "threshold = 0.7   # trailing comment\n"
          "replicates = 2\n"
          "base_seed = 99\n"
          "jobs = 3\n"
          "models = FF, 2K\n"
          "selection = avg_clust, assortativity\n"
          "cba_m_grid = 1, 2, 3\n"
          "ff_burn_grid = 0.1, 0.2\n"
          "eval_include_edges = false\n");
    auto config = load_config(dir.str("run.conf"));
    CHECK(config.threshold == doctest::Approx(0.7));
    CHECK(config.replicates == 2);
    CHECK(config.base_seed == 99);
    CHECK(config.jobs == 3);
    CHECK(config.models == std::vector<ModelId>{ModelId::TWO_K, ModelId::FF});
    CHECK(config.selection == std::vector<std::string>{"avg_clust", "assortativity"});
    CHECK(config.cba_m_grid == std::vector<double>{1, 2, 3});
    CHECK(config.ff_burn_grid == std::vector<double>{0.1, 0.2});
    CHECK_FALSE(config.eval_include_edges);

    RunConfig fresh;
    CHECK_THROWS_AS(apply_config_line(fresh, "nonsense", "1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_line(fresh, "threshold", "1.5"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_line(fresh, "replicates", "0"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_line(fresh, "models", "CBA, bogus"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_line(fresh, "selection", "bogus"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_line(fresh, "cba_p_grid", "0.5, 2.0"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_line(fresh, "eval_include_edges", "maybe"),
                    std::invalid_argument);

    write(dir.path / "broken.conf", "threshold\n");
    CHECK_THROWS_AS(load_config(dir.str("broken.conf")), std::invalid_argument);

    CHECK_THROWS_AS(parse_model_list(""), std::invalid_argument);
    CHECK(parse_model_list("SBM,CBA,SBM") ==
          std::vector<ModelId>{ModelId::CBA, ModelId::SBM});
}

TEST_CASE("metrics stage profiles every readable network and skips the rest") {
    TempDir dir("metrics_stage");
    auto manifest_path = build_corpus(dir);
    auto manifest = load_manifest(manifest_path);
    manifest.entries.push_back({dir.str("nets/ghost.txt"), "ghost", "friendship"});

    RunConfig config;
    auto out = dir.str("out");
    CHECK(run_metrics(manifest, config, out) == 5);

    std::istringstream csv(read_text_file(out + "/metrics.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("network,domain,assortativity,", 0) == 0);
    std::vector<std::string> names;
    while (std::getline(csv, line))
        if (!line.empty()) names.push_back(split_csv(line)[0]);
    CHECK(names == std::vector<std::string>{"ring", "wheel", "chain", "star", "clique"});

    CorpusManifest nothing;
    nothing.entries.push_back({dir.str("nets/ghost.txt"), "ghost", "friendship"});
    CHECK_THROWS_AS(run_metrics(nothing, config, dir.str("out2")), std::runtime_error);
}

TEST_CASE("selection stage writes the correlation network and a valid subset") {
    TempDir dir("selection_stage");
    auto manifest = load_manifest(build_corpus(dir));
    RunConfig config;
    auto out = dir.str("out");
    run_metrics(manifest, config, out);

    CHECK_THROWS_AS(run_selection(config, dir.str("empty")), std::runtime_error);
    run_selection(config, out);

    std::istringstream edges(read_text_file(out + "/correlation_edges.csv"));
    std::string header;
    std::getline(edges, header);
    CHECK(header == "metric_a,metric_b,weight");
    std::string line;
    while (std::getline(edges, line)) {
        if (line.empty()) continue;
        auto fields = split_csv(line);
        REQUIRE(fields.size() == 3);
        CHECK(parse_double(fields[2]) > config.threshold);
    }

    auto selection = resolve_selection(config, out);
    CHECK_FALSE(selection.empty());
    validate_selection(selection);
    for (const auto& name : selection) {
        CHECK(name != "num_nodes");
        CHECK(name != "num_edges");
    }
}

TEST_CASE("selection resolution prefers config, then the stage file, then defaults") {
    TempDir dir("resolve");
    RunConfig config;
    CHECK(resolve_selection(config, dir.str()) == kDefaultSelection);

    write(dir.path / "selection.txt", "avg_clust\nmax_deg_n\n");
    CHECK(resolve_selection(config, dir.str()) ==
          std::vector<std::string>{"avg_clust", "max_deg_n"});

    config.selection = {"density"};
    CHECK(resolve_selection(config, dir.str()) == std::vector<std::string>{"density"});

    write(dir.path / "selection.txt", "garbage_metric\n");
    config.selection.clear();
    CHECK_THROWS_AS(resolve_selection(config, dir.str()), std::invalid_argument);
}

TEST_CASE("calibration stage writes a ledger, metadata, and counterpart per pair") {
    TempDir dir("calibrate_stage");
    auto manifest = load_manifest(build_corpus(dir));
    manifest.entries.resize(2);  // ring and wheel are enough here
    auto config = fast_config();
    auto out = dir.str("out");
    run_metrics(manifest, config, out);

    CHECK(run_calibration(manifest, config, out) == 4);
    for (const char* stem : {"ring__2K", "ring__CBA", "wheel__2K", "wheel__CBA"}) {
        CAPTURE(stem);
        CHECK(fs::exists(fs::path(out) / "calibration" / (std::string(stem) + ".csv")));
        CHECK(fs::exists(fs::path(out) / "calibration" / (std::string(stem) + ".json")));
        CHECK(fs::exists(fs::path(out) / "counterparts" / (std::string(stem) + ".txt")));
        CHECK(fs::exists(fs::path(out) / "counterparts" / (std::string(stem) + ".json")));
    }

    std::istringstream ledger(
        read_text_file(out + "/calibration/ring__CBA.csv"));
    std::string header;
    std::getline(ledger, header);
    CHECK(header == "point_index,m,p,mean_distance,masked_slots,failures,replicate_distances");
    int rows = 0;
    for (std::string line; std::getline(ledger, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 4);  // 2 x 2 grid

    auto meta = read_text_file(out + "/calibration/ring__2K.json");
    CHECK(meta.find("\"network\": \"ring\"") != std::string::npos);
    CHECK(meta.find("\"evaluation_metrics\"") != std::string::npos);
    CHECK(meta.find("\"counterpart_metrics\"") != std::string::npos);
    CHECK(meta.find("\"error\"") == std::string::npos);
}

TEST_CASE("report stage summarizes calibrated pairs") {
    TempDir dir("report_stage");
    auto manifest = load_manifest(build_corpus(dir));
    auto config = fast_config();
    auto out = dir.str("out");

    CHECK_THROWS_AS(run_report(manifest, config, out), std::runtime_error);
    run_metrics(manifest, config, out);
    CHECK_THROWS_AS(run_report(manifest, config, out), std::runtime_error);
    run_calibration(manifest, config, out);
    run_report(manifest, config, out);

    std::istringstream domain(read_text_file(out + "/domain_distance.csv"));
    std::string line;
    std::getline(domain, line);
    CHECK(line == "domain,2K,CBA");
    std::getline(domain, line);
    auto fields = split_csv(line);
    REQUIRE(fields.size() == 3);
    CHECK(fields[0] == "friendship");
    CHECK(parse_double(fields[1]) >= 0.0);

    std::istringstream scatter(read_text_file(out + "/scatter.csv"));
    std::getline(scatter, line);
    CHECK(line == "network,category,avg_clust,p_diam_log,max_deg_n,max_eigen");
    int real_rows = 0, model_rows = 0;
    while (std::getline(scatter, line)) {
        if (line.empty()) continue;
        auto cat = split_csv(line)[1];
        if (cat == "real") ++real_rows;
        else ++model_rows;
    }
    CHECK(real_rows == 5);
    CHECK(model_rows == 10);

    std::istringstream diag(read_text_file(out + "/diagnostic.csv"));
    std::getline(diag, line);
    CHECK(line == "model,counterparts,joint_pass,pass_fraction,mean_joint_score");
    int diag_rows = 0;
    while (std::getline(diag, line))
        if (!line.empty()) ++diag_rows;
    CHECK(diag_rows == 2);
}

TEST_CASE("the full pipeline is byte-identical across reruns") {
    TempDir dir("determinism");
    auto manifest = load_manifest(build_corpus(dir));
    auto config = fast_config();

    run_all(manifest, config, dir.str("out_a"));
    run_all(manifest, config, dir.str("out_b"));

    auto a = snapshot(dir.path / "out_a");
    auto b = snapshot(dir.path / "out_b");
    REQUIRE_FALSE(a.empty());
    CHECK(a == b);
}
