#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netfit/graph.hpp"

namespace netfit {

// Canonical column order: the structural metrics alphabetically, then the
// two raw size counts.
inline constexpr std::array<std::string_view, 18> kMetricNames{
    "assortativity", "avg_clust", "avg_deg", "avg_path_log", "density",
    "glob_clust",    "idp_1",     "idp_2",   "idp_3",        "idp_4",
    "max_deg",       "max_deg_n", "max_ebc", "max_eigen",    "max_vbc",
    "p_diam_log",    "num_nodes", "num_edges"};

bool is_metric_name(std::string_view name);

struct DegreeMetrics {
    double avg_deg = 0.0;
    double max_deg = 0.0;
    double max_deg_n = 0.0;
    double density = 0.0;
    std::array<double, 4> idp{};  // shares of [0,u/2), [u/2,u), [u,2u), [2u,inf), u = avg_deg
};
DegreeMetrics degree_metrics(const Graph& g);

struct ClusteringMetrics {
    double avg_clust = 0.0;
    double glob_clust = 0.0;
};
ClusteringMetrics clustering_metrics(const Graph& g, int jobs = 1);

// Pearson correlation of endpoint degrees over both orientations of every
// edge.  Empty when the endpoint degrees have zero variance.
std::optional<double> assortativity(const Graph& g);

struct PathOptions {
    int exact_cutoff = 20000;   // all-sources BFS up to this many nodes
    int sample_sources = 2000;  // seeded distinct sources above the cutoff
};

struct PathMetrics {
    double avg_path_log = 0.0;  // mean shortest-path length / ln(n)
    double p_diam_log = 0.0;    // pseudo-diameter / ln(n)
};
PathMetrics path_metrics(const Graph& g, const PathOptions& opt = {}, int jobs = 1);

// Lower bound on the diameter from iterated double-sweep BFS; exact on trees.
int pseudo_diameter(const Graph& g);

struct CentralityMetrics {
    double max_eigen = 0.0;  // largest entry of the unit-L2 principal eigenvector
    double max_vbc = 0.0;    // max vertex betweenness / ((n-1)(n-2)/2)
    double max_ebc = 0.0;    // max edge betweenness / (n(n-1)/2)
};
CentralityMetrics centrality_metrics(const Graph& g, int jobs = 1);

double max_eigen_centrality(const Graph& g);

// Raw betweenness sums with each unordered pair counted once; edge values
// align with Graph::edge_list().
struct Betweenness {
    std::vector<double> vertex;
    std::vector<double> edge;
};
Betweenness brandes_betweenness(const Graph& g, int jobs = 1);

struct MetricVector {
    std::optional<double> assortativity;
    double avg_clust = 0.0;
    double avg_deg = 0.0;
    double avg_path_log = 0.0;
    double density = 0.0;
    double glob_clust = 0.0;
    double idp_1 = 0.0;
    double idp_2 = 0.0;
    double idp_3 = 0.0;
    double idp_4 = 0.0;
    double max_deg = 0.0;
    double max_deg_n = 0.0;
    double max_ebc = 0.0;
    double max_eigen = 0.0;
    double max_vbc = 0.0;
    double p_diam_log = 0.0;
    double num_nodes = 0.0;
    double num_edges = 0.0;

    // NaN for undefined assortativity.
    double value(std::string_view name) const;
};

struct MetricOptions {
    PathOptions path;
    int jobs = 1;
};

// Full profile of a simplified graph.  Path and centrality metrics use the
// largest component when the graph is disconnected; sizes stay those of the
// full graph.
MetricVector metric_vector(const Graph& g, const MetricOptions& opt = {});

using MetricSelection = std::vector<std::string>;

// Throws std::invalid_argument on empty, duplicate, or unknown names.
void validate_selection(std::span<const std::string> selection);

std::vector<double> project(const MetricVector& v, std::span<const std::string> selection);

}  // namespace netfit
