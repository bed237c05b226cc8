#include "netfit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "netfit/parallel.hpp"
#include "netfit/rng.hpp"

namespace netfit {
namespace {

constexpr std::uint64_t kPathSampleSeed = 0x5eedf0e2a1b3c4d5ULL;
constexpr std::size_t kSourceBlock = 64;

// BFS distances from src into dist (-1 = unreachable); returns visit order.
void bfs_distances(const Graph& g, int src, std::vector<int>& dist, std::vector<int>& order) {
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    dist[src] = 0;
    order.push_back(src);
    for (std::size_t head = 0; head < order.size(); ++head) {
        int u = order[head];
        for (int v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                order.push_back(v);
            }
        }
    }
}

int farthest_node(const std::vector<int>& dist) {
    int far = 0;
    for (int v = 1; v < static_cast<int>(dist.size()); ++v)
        if (dist[v] > dist[far]) far = v;
    return far;
}

std::int64_t count_common_neighbors(std::span<const int> a, std::span<const int> b) {
    std::int64_t common = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (a[i] > b[j]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return common;
}

}  // namespace

bool is_metric_name(std::string_view name) {
    return std::find(kMetricNames.begin(), kMetricNames.end(), name) != kMetricNames.end();
}

DegreeMetrics degree_metrics(const Graph& g) {
    const int n = g.node_count();
    if (n < 2) throw std::invalid_argument("degree metrics need at least 2 nodes");
    const double m = static_cast<double>(g.edge_count());

    DegreeMetrics out;
    out.avg_deg = 2.0 * m / n;
    int max_deg = 0;
    for (int v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
    out.max_deg = max_deg;
    out.max_deg_n = static_cast<double>(max_deg) / n;
    out.density = 2.0 * m / (static_cast<double>(n) * (n - 1));

    const double mu = out.avg_deg;
    std::array<std::int64_t, 4> counts{};
    for (int v = 0; v < n; ++v) {
        double d = g.degree(v);
        int slot = d < mu / 2 ? 0 : d < mu ? 1 : d < 2 * mu ? 2 : 3;
        ++counts[slot];
    }
    for (int i = 0; i < 4; ++i) out.idp[i] = static_cast<double>(counts[i]) / n;
    return out;
}

ClusteringMetrics clustering_metrics(const Graph& g, int jobs) {
    const int n = g.node_count();
    if (n < 3) throw std::invalid_argument("clustering metrics need at least 3 nodes");

    auto edges = g.edge_list();
    std::vector<std::int64_t> common(edges.size());
    parallel_for(edges.size(), jobs, [&](std::size_t e) {
        common[e] = count_common_neighbors(g.neighbors(edges[e].first), g.neighbors(edges[e].second));
    });

    // edge (u,v) with c common neighbors lies in c triangles; every triangle
    // is seen once per incident vertex via its opposite edge pair
    std::vector<std::int64_t> twice_triangles(n, 0);
    std::int64_t total_thirds = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        twice_triangles[edges[e].first] += common[e];
        twice_triangles[edges[e].second] += common[e];
        total_thirds += common[e];
    }

    double local_sum = 0.0;
    std::int64_t wedges = 0;
    for (int v = 0; v < n; ++v) {
        std::int64_t d = g.degree(v);
        if (d >= 2) {
            std::int64_t pairs = d * (d - 1) / 2;
            local_sum += static_cast<double>(twice_triangles[v]) / (2.0 * static_cast<double>(pairs));
            wedges += pairs;
        }
    }

    ClusteringMetrics out;
    out.avg_clust = local_sum / n;
    out.glob_clust = wedges == 0 ? 0.0 : static_cast<double>(total_thirds) / static_cast<double>(wedges);
    return out;
}

std::optional<double> assortativity(const Graph& g) {
    const int n = g.node_count();
    int dmin = std::numeric_limits<int>::max(), dmax = 0;
    for (int v = 0; v < n; ++v) {
        int d = g.degree(v);
        if (d == 0) continue;
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    if (dmax == 0 || dmin == dmax) return std::nullopt;

    // endpoint-degree mean over both orientations: node v appears deg(v) times
    double weight = 0.0, mean_num = 0.0;
    for (int v = 0; v < n; ++v) {
        double d = g.degree(v);
        weight += d;
        mean_num += d * d;
    }
    const double mu = mean_num / weight;

    double var = 0.0;
    for (int v = 0; v < n; ++v) {
        double d = g.degree(v);
        var += d * (d - mu) * (d - mu);
    }
    double cov = 0.0;
    for (int u = 0; u < n; ++u) {
        double du = g.degree(u);
        for (int v : g.neighbors(u)) cov += (du - mu) * (g.degree(v) - mu);
    }
    return cov / var;
}

int pseudo_diameter(const Graph& g) {
    if (!is_connected(g)) throw std::invalid_argument("pseudo diameter needs a connected graph");
    std::vector<int> dist(g.node_count());
    std::vector<int> order;
    order.reserve(g.node_count());

    int src = 0, best = -1;
    for (;;) {
        bfs_distances(g, src, dist, order);
        int far = farthest_node(dist);
        if (dist[far] <= best) return best;
        best = dist[far];
        src = far;
    }
}

PathMetrics path_metrics(const Graph& g, const PathOptions& opt, int jobs) {
    const int n = g.node_count();
    if (n < 2) throw std::invalid_argument("path metrics need at least 2 nodes");
    if (!is_connected(g)) throw std::invalid_argument("path metrics need a connected graph");

    std::vector<int> sources;
    if (n <= opt.exact_cutoff) {
        sources.resize(n);
        std::iota(sources.begin(), sources.end(), 0);
    } else {
        std::vector<int> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        Rng rng(kPathSampleSeed);
        int k = std::min(opt.sample_sources, n);
        for (int i = 0; i < k; ++i)
            std::swap(pool[i], pool[i + rng.below(static_cast<std::uint64_t>(n - i))]);
        sources.assign(pool.begin(), pool.begin() + k);
    }

    struct State {
        std::vector<int> dist, order;
        std::int64_t sum = 0;
    };
    std::int64_t total = 0;
    ordered_block_reduce(
        sources.size(), kSourceBlock, jobs,
        [&] { return State{std::vector<int>(n), {}, 0}; },
        [&](State& st, std::size_t i) {
            bfs_distances(g, sources[i], st.dist, st.order);
            for (int d : st.dist) st.sum += d;
        },
        [&](State& st) { total += st.sum; });

    const double pair_count = static_cast<double>(sources.size()) * (n - 1);
    PathMetrics out;
    out.avg_path_log = (static_cast<double>(total) / pair_count) / std::log(n);
    out.p_diam_log = pseudo_diameter(g) / std::log(n);
    return out;
}

double max_eigen_centrality(const Graph& g) {
    const int n = g.node_count();
    if (n < 1) throw std::invalid_argument("eigenvector centrality needs a nonempty graph");
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n))), w(n);

    // iterate on A+I so bipartite graphs cannot oscillate
    auto step = [&] {
        for (int u = 0; u < n; ++u) {
            double acc = v[u];
            for (int t : g.neighbors(u)) acc += v[t];
            w[u] = acc;
        }
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : w) x /= norm;
        v.swap(w);
    };

    // Near-degenerate spectra (e.g. barely perturbed ring lattices) cannot
    // reach the tolerance in any reasonable budget; the capped estimate is
    // still deterministic and close, so return it instead of failing.
    const long max_iter = 100000;
    for (long it = 1; it <= max_iter; ++it) {
        step();
        double diff = 0.0;
        for (int u = 0; u < n; ++u) diff = std::max(diff, std::abs(v[u] - w[u]));
        if (diff <= 1e-13) {
            for (int q = 0; q < 64; ++q) step();
            break;
        }
    }
    return *std::max_element(v.begin(), v.end());
}

Betweenness brandes_betweenness(const Graph& g, int jobs) {
    const int n = g.node_count();
    const std::int64_t m = g.edge_count();

    // undirected edge id per CSR arc, aligned with edge_list() order
    std::vector<std::int64_t> edge_id_base(n + 1, 0);
    for (int u = 0; u < n; ++u) {
        auto nb = g.neighbors(u);
        edge_id_base[u + 1] = edge_id_base[u] +
            (nb.end() - std::upper_bound(nb.begin(), nb.end(), u));
    }
    std::vector<std::int64_t> arc_edge(2 * static_cast<std::size_t>(m));
    std::vector<std::int64_t> arc_offset(n);
    {
        std::int64_t p = 0;
        for (int u = 0; u < n; ++u) {
            arc_offset[u] = p;
            auto nb = g.neighbors(u);
            for (int v : nb) {
                if (u < v) {
                    auto lo = std::upper_bound(nb.begin(), nb.end(), u);
                    arc_edge[p] = edge_id_base[u] + (std::lower_bound(lo, nb.end(), v) - lo);
                } else {
                    auto vb = g.neighbors(v);
                    auto lo = std::upper_bound(vb.begin(), vb.end(), v);
                    arc_edge[p] = edge_id_base[v] + (std::lower_bound(lo, vb.end(), u) - lo);
                }
                ++p;
            }
        }
    }

    struct State {
        std::vector<int> dist, order;
        std::vector<double> sigma, delta, vertex, edge;
    };
    Betweenness out;
    out.vertex.assign(n, 0.0);
    out.edge.assign(static_cast<std::size_t>(m), 0.0);

    ordered_block_reduce(
        static_cast<std::size_t>(n), kSourceBlock, jobs,
        [&] {
            State st;
            st.dist.resize(n);
            st.order.reserve(n);
            st.sigma.resize(n);
            st.delta.resize(n);
            st.vertex.assign(n, 0.0);
            st.edge.assign(static_cast<std::size_t>(m), 0.0);
            return st;
        },
        [&](State& st, std::size_t si) {
            const int s = static_cast<int>(si);
            std::fill(st.dist.begin(), st.dist.end(), -1);
            std::fill(st.sigma.begin(), st.sigma.end(), 0.0);
            std::fill(st.delta.begin(), st.delta.end(), 0.0);
            st.order.clear();
            st.dist[s] = 0;
            st.sigma[s] = 1.0;
            st.order.push_back(s);
            for (std::size_t head = 0; head < st.order.size(); ++head) {
                int u = st.order[head];
                for (int v : g.neighbors(u)) {
                    if (st.dist[v] < 0) {
                        st.dist[v] = st.dist[u] + 1;
                        st.order.push_back(v);
                    }
                    if (st.dist[v] == st.dist[u] + 1) st.sigma[v] += st.sigma[u];
                }
            }
            for (std::size_t k = st.order.size(); k-- > 1;) {
                int w = st.order[k];
                auto nb = g.neighbors(w);
                double coeff = (1.0 + st.delta[w]) / st.sigma[w];
                for (std::size_t i = 0; i < nb.size(); ++i) {
                    int v = nb[i];
                    if (st.dist[v] != st.dist[w] - 1) continue;
                    double c = st.sigma[v] * coeff;
                    st.delta[v] += c;
                    st.edge[arc_edge[arc_offset[w] + static_cast<std::int64_t>(i)]] += c;
                }
                if (w != s) st.vertex[w] += st.delta[w];
            }
        },
        [&](State& st) {
            for (int v = 0; v < n; ++v) out.vertex[v] += st.vertex[v];
            for (std::size_t e = 0; e < out.edge.size(); ++e) out.edge[e] += st.edge[e];
        });

    // each unordered pair was accumulated from both endpoints
    for (double& x : out.vertex) x /= 2.0;
    for (double& x : out.edge) x /= 2.0;
    return out;
}

CentralityMetrics centrality_metrics(const Graph& g, int jobs) {
    const int n = g.node_count();
    if (n < 3) throw std::invalid_argument("centrality metrics need at least 3 nodes");
    if (!is_connected(g)) throw std::invalid_argument("centrality metrics need a connected graph");

    CentralityMetrics out;
    out.max_eigen = max_eigen_centrality(g);
    auto bc = brandes_betweenness(g, jobs);
    double nd = n;
    out.max_vbc = *std::max_element(bc.vertex.begin(), bc.vertex.end()) / ((nd - 1) * (nd - 2) / 2.0);
    out.max_ebc = *std::max_element(bc.edge.begin(), bc.edge.end()) / (nd * (nd - 1) / 2.0);
    return out;
}

MetricVector metric_vector(const Graph& g, const MetricOptions& opt) {
    const int n = g.node_count();
    if (n < 3) throw std::invalid_argument("metric vector needs at least 3 nodes");

    MetricVector mv;
    mv.num_nodes = n;
    mv.num_edges = static_cast<double>(g.edge_count());

    auto deg = degree_metrics(g);
    mv.avg_deg = deg.avg_deg;
    mv.max_deg = deg.max_deg;
    mv.max_deg_n = deg.max_deg_n;
    mv.density = deg.density;
    mv.idp_1 = deg.idp[0];
    mv.idp_2 = deg.idp[1];
    mv.idp_3 = deg.idp[2];
    mv.idp_4 = deg.idp[3];

    auto clust = clustering_metrics(g, opt.jobs);
    mv.avg_clust = clust.avg_clust;
    mv.glob_clust = clust.glob_clust;
    mv.assortativity = assortativity(g);

    const Graph* core = &g;
    Graph lcc;
    if (!is_connected(g)) {
        lcc = largest_connected_component(g);
        core = &lcc;
    }
    auto paths = path_metrics(*core, opt.path, opt.jobs);
    mv.avg_path_log = paths.avg_path_log;
    mv.p_diam_log = paths.p_diam_log;
    auto cent = centrality_metrics(*core, opt.jobs);
    mv.max_eigen = cent.max_eigen;
    mv.max_vbc = cent.max_vbc;
    mv.max_ebc = cent.max_ebc;
    return mv;
}

double MetricVector::value(std::string_view name) const {
    if (name == "assortativity")
        return assortativity ? *assortativity : std::numeric_limits<double>::quiet_NaN();
    if (name == "avg_clust") return avg_clust;
    if (name == "avg_deg") return avg_deg;
    if (name == "avg_path_log") return avg_path_log;
    if (name == "density") return density;
    if (name == "glob_clust") return glob_clust;
    if (name == "idp_1") return idp_1;
    if (name == "idp_2") return idp_2;
    if (name == "idp_3") return idp_3;
    if (name == "idp_4") return idp_4;
    if (name == "max_deg") return max_deg;
    if (name == "max_deg_n") return max_deg_n;
    if (name == "max_ebc") return max_ebc;
    if (name == "max_eigen") return max_eigen;
    if (name == "max_vbc") return max_vbc;
    if (name == "p_diam_log") return p_diam_log;
    if (name == "num_nodes") return num_nodes;
    if (name == "num_edges") return num_edges;
    throw std::invalid_argument("unknown metric name: " + std::string(name));
}

void validate_selection(std::span<const std::string> selection) {
    if (selection.empty()) throw std::invalid_argument("empty metric selection");
    std::unordered_set<std::string_view> seen;
    for (const auto& name : selection) {
        if (!is_metric_name(name)) throw std::invalid_argument("unknown metric name: " + name);
        if (!seen.insert(name).second)
            throw std::invalid_argument("duplicate metric name: " + name);
    }
}

std::vector<double> project(const MetricVector& v, std::span<const std::string> selection) {
    validate_selection(selection);
    std::vector<double> out;
    out.reserve(selection.size());
    for (const auto& name : selection) out.push_back(v.value(name));
    return out;
}

}  // namespace netfit
