#include "netfit/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace netfit {

Graph Graph::from_edges(int node_count, std::span<const Edge> edges) {
    if (node_count < 0) throw std::invalid_argument("negative node count");
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v) continue;
        canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    Graph g;
    g.offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
    for (auto [u, v] : canon) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (int v = 0; v < node_count; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.targets_.resize(static_cast<std::size_t>(g.offsets_[node_count]));
    std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : canon) {
        g.targets_[cursor[u]++] = v;
        g.targets_[cursor[v]++] = u;
    }
    // per-node lists end up sorted because canon is sorted and targets are
    // appended in two ordered passes; u-side entries of node v arrive in
    // ascending u already, v-side in ascending v
    for (int v = 0; v < node_count; ++v)
        std::sort(g.targets_.begin() + g.offsets_[v], g.targets_.begin() + g.offsets_[v + 1]);
    return g;
}

bool Graph::has_edge(int u, int v) const {
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count()));
    for (int u = 0; u < node_count(); ++u)
        for (int v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph simplify(int node_count, std::span<const Edge> edges) {
    return Graph::from_edges(node_count, edges);
}

ParsedGraph parse_edge_list(std::istream& in) {
    std::unordered_map<std::string, int> ids;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    std::string line;
    long line_no = 0;

    auto id_of = [&](std::string&& tok) {
        auto [it, inserted] = ids.try_emplace(std::move(tok), static_cast<int>(labels.size()));
        if (inserted) labels.push_back(it->first);
        return it->second;
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        std::string a, b;
        if (!(row >> a)) continue;  // blank line
        if (a[0] == '#' || a[0] == '%') continue;
        if (!(row >> b))
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": expected two node tokens");
        int u = id_of(std::move(a));  // sequence the interning left to right
        int v = id_of(std::move(b));
        edges.emplace_back(u, v);
    }
    if (edges.empty()) throw std::runtime_error("no edges");

    ParsedGraph out;
    out.graph = Graph::from_edges(static_cast<int>(labels.size()), edges);
    out.labels = std::move(labels);
    return out;
}

ParsedGraph parse_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    return parse_edge_list(in);
}

std::vector<int> connected_components(const Graph& g) {
    const int n = g.node_count();
    std::vector<int> comp(n, -1);
    std::vector<int> stack;
    int next = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : g.neighbors(u)) {
                if (comp[v] < 0) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

bool is_connected(const Graph& g) {
    if (g.node_count() == 0) return false;
    auto comp = connected_components(g);
    return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

Graph largest_connected_component(const Graph& g) {
    const int n = g.node_count();
    if (n == 0) throw std::runtime_error("largest component of an empty graph");
    auto comp = connected_components(g);
    int comp_count = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> size(comp_count, 0);
    for (int c : comp) ++size[c];
    // components are numbered by first appearance, so the first maximum is
    // the one containing the smallest original node id
    int best = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());

    std::vector<int> remap(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v)
        if (comp[v] == best) remap[v] = next++;
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        if (comp[u] != best) continue;
        for (int v : g.neighbors(u))
            if (u < v) edges.emplace_back(remap[u], remap[v]);
    }
    return Graph::from_edges(next, edges);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (auto [u, v] : g.edge_list()) out << u << ' ' << v << '\n';
}

}  // namespace netfit
