#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netfit {

using Edge = std::pair<int, int>;

/// Simple undirected unweighted graph over dense node ids 0..n-1.
///
/// Neighbor lists live in one compressed array, sorted per node. The
/// structure is immutable after construction, so it can be shared
/// read-only across worker threads.
class Graph {
public:
    Graph() = default;

    /// Builds a simplified graph from an arbitrary edge multiset:
    /// self-loops dropped, duplicate edges collapsed, orientation
    /// discarded. Node ids must lie in [0, node_count).
    static Graph from_edges(int node_count, std::span<const Edge> edges);

    int node_count() const noexcept { return static_cast<int>(offsets_.size()) - 1; }
    std::int64_t edge_count() const noexcept {
        return static_cast<std::int64_t>(targets_.size()) / 2;
    }

    int degree(int v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }

    std::span<const int> neighbors(int v) const {
        return {targets_.data() + offsets_[v],
                static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
    }

    bool has_edge(int u, int v) const;

    /// Edges as (u, v) pairs with u < v, lexicographically sorted.
    std::vector<Edge> edge_list() const;

private:
    std::vector<std::int64_t> offsets_{0};
    std::vector<int> targets_;
};

/// Collapses an explicit multigraph into a Graph. Idempotent.
Graph simplify(int node_count, std::span<const Edge> edges);

/// An edge-list stream parsed into a graph plus the original node labels,
/// indexed by dense id (first-appearance order).
struct ParsedGraph {
    Graph graph;
    std::vector<std::string> labels;
};

/// Reads whitespace-separated node-pair lines. Lines starting with '#' or
/// '%' are comments, blank lines are skipped, columns past the first two
/// (weights, timestamps) are ignored. Labels are arbitrary tokens and get
/// dense ids in first-appearance order.
///
/// Throws std::runtime_error naming the line number on a one-token line,
/// or "no edges" when the stream holds no edge at all.
ParsedGraph parse_edge_list(std::istream& in);
ParsedGraph parse_edge_list_file(const std::string& path);

/// Component id per node, numbered in order of first appearance.
std::vector<int> connected_components(const Graph& g);

bool is_connected(const Graph& g);

/// Induced subgraph on the largest component, relabeled densely in
/// ascending original-id order. Size ties go to the component holding the
/// smallest original node id. Throws std::runtime_error on an empty graph.
Graph largest_connected_component(const Graph& g);

/// Writes one "u v" line per edge, ascending. The inverse of parse for
/// label-free graphs.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace netfit
