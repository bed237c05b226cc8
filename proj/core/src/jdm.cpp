#include <algorithm>
#include <numeric>
#include <set>

#include "netfit/generators.hpp"
#include "netfit/rng.hpp"

namespace netfit {

std::int64_t JointDegreeMatrix::node_count() const {
    std::int64_t n = 0;
    for (const auto& [deg, cnt] : degree_counts) n += cnt;
    return n;
}

std::int64_t JointDegreeMatrix::edge_count() const {
    std::int64_t m = 0;
    for (const auto& [key, cnt] : edges) m += cnt;
    return m;
}

JointDegreeMatrix extract_jdm(const Graph& g) {
    JointDegreeMatrix jdm;
    for (int v = 0; v < g.node_count(); ++v) ++jdm.degree_counts[g.degree(v)];
    for (auto [u, v] : g.edge_list()) {
        int du = g.degree(u), dv = g.degree(v);
        ++jdm.edges[{std::min(du, dv), std::max(du, dv)}];
    }
    return jdm;
}

void validate_jdm(const JointDegreeMatrix& jdm) {
    for (const auto& [deg, cnt] : jdm.degree_counts) {
        if (deg < 0) throw std::invalid_argument("negative degree class");
        if (cnt < 0) throw std::invalid_argument("negative degree class count");
    }
    std::map<int, std::int64_t> stubs;
    for (const auto& [key, cnt] : jdm.edges) {
        auto [k, l] = key;
        if (cnt < 0) throw std::invalid_argument("negative edge count in degree matrix");
        if (cnt == 0) continue;
        if (k > l) throw std::invalid_argument("degree pair keys must be ordered");
        if (k < 1) throw std::invalid_argument("edges incident to a zero-degree class");
        auto nk = jdm.degree_counts.find(k), nl = jdm.degree_counts.find(l);
        if (nk == jdm.degree_counts.end() || nl == jdm.degree_counts.end())
            throw std::invalid_argument("edge entry references a missing degree class");
        std::int64_t cap = k == l
            ? static_cast<std::int64_t>(nk->second) * (nk->second - 1) / 2
            : static_cast<std::int64_t>(nk->second) * nl->second;
        if (cnt > cap) throw std::invalid_argument("degree pair entry exceeds class capacity");
        stubs[k] += cnt;
        stubs[l] += cnt;  // (k,k) entries consume two class-k stubs per edge
    }
    for (const auto& [deg, cnt] : jdm.degree_counts) {
        std::int64_t want = static_cast<std::int64_t>(deg) * cnt;
        auto it = stubs.find(deg);
        std::int64_t have = it == stubs.end() ? 0 : it->second;
        if (have != want)
            throw std::invalid_argument("stub accounting mismatch for degree " +
                                        std::to_string(deg));
    }
    for (const auto& [deg, have] : stubs) {
        if (jdm.degree_counts.find(deg) == jdm.degree_counts.end() && have != 0)
            throw std::invalid_argument("edges reference an absent degree class");
    }
}

namespace {

// Degree classes with residual buckets; placement always draws from the
// least-saturated (highest-residual) nodes, breaking ties at random.
struct Builder {
    Rng rng;
    int n = 0;
    std::vector<int> klass;                          // node -> class index
    std::vector<int> residual;                       // unplaced stubs
    std::vector<std::pair<int, int>> ranges;         // class -> [begin, end) node ids
    std::vector<std::vector<std::vector<int>>> buckets;  // class -> residual -> nodes
    std::vector<std::size_t> pos;                    // node -> index in its bucket
    std::vector<int> max_res;                        // class -> highest useful residual
    std::vector<std::set<int>> adj;

    explicit Builder(std::uint64_t seed) : rng(seed) {}

    void bucket_remove(int v) {
        auto& bucket = buckets[klass[v]][residual[v]];
        int moved = bucket.back();
        bucket[pos[v]] = moved;
        pos[moved] = pos[v];
        bucket.pop_back();
    }

    void bucket_insert(int v) {
        auto& bucket = buckets[klass[v]][residual[v]];
        pos[v] = bucket.size();
        bucket.push_back(v);
        max_res[klass[v]] = std::max(max_res[klass[v]], residual[v]);
    }

    void consume_stub(int v) {
        bucket_remove(v);
        --residual[v];
        bucket_insert(v);
    }

    void add_edge(int u, int v) {
        adj[u].insert(v);
        adj[v].insert(u);
    }

    void remove_edge(int u, int v) {
        adj[u].erase(v);
        adj[v].erase(u);
    }

    // Highest-residual node of class c passing pred, random among ties.
    template <typename Pred>
    int pick_free(int c, Pred&& pred) {
        int r = max_res[c];
        while (r > 0 && buckets[c][r].empty()) --r;
        max_res[c] = r;
        for (; r > 0; --r) {
            const auto& bucket = buckets[c][r];
            if (bucket.empty()) continue;
            std::size_t start = rng.index(bucket.size());
            for (std::size_t i = 0; i < bucket.size(); ++i) {
                int v = bucket[(start + i) % bucket.size()];
                if (pred(v)) return v;
            }
        }
        return -1;
    }

    bool try_switch(int u, int cl) {
        int v = pick_free(cl, [&](int x) { return x != u; });
        if (v < 0) {
            // the arrival's own class may cover both ends of a (k,k) edge
            if (klass[u] == cl && residual[u] >= 2) v = u;
            else return false;
        }
        auto [begin, end] = ranges[cl];
        int span = end - begin;
        int w_start = static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
        for (int i = 0; i < span; ++i) {
            int w = begin + (w_start + i) % span;
            if (w == u || adj[u].count(w)) continue;
            if (adj[w].empty()) continue;
            std::vector<int> nbrs(adj[w].begin(), adj[w].end());
            std::size_t t_start = rng.index(nbrs.size());
            for (std::size_t j = 0; j < nbrs.size(); ++j) {
                int t = nbrs[(t_start + j) % nbrs.size()];
                if (t == v || adj[v].count(t)) continue;
                // hand w's edge to v, then link u to the freed w; both the
                // rewired pair's degree classes and the placed entry stay exact
                remove_edge(w, t);
                add_edge(v, t);
                add_edge(u, w);
                consume_stub(u);
                consume_stub(v);
                return true;
            }
        }
        return false;
    }
};

}  // namespace

Graph construct_2k(const JointDegreeMatrix& jdm, std::uint64_t seed) {
    validate_jdm(jdm);

    Builder b(seed);
    b.n = static_cast<int>(jdm.node_count());

    std::map<int, int> class_of_degree;
    int next_id = 0;
    for (const auto& [deg, cnt] : jdm.degree_counts) {
        int c = static_cast<int>(b.ranges.size());
        class_of_degree[deg] = c;
        b.ranges.emplace_back(next_id, next_id + cnt);
        b.buckets.emplace_back(deg + 1);
        b.max_res.push_back(deg);
        next_id += cnt;
    }
    b.klass.resize(b.n);
    b.residual.resize(b.n);
    b.pos.resize(b.n);
    b.adj.resize(b.n);
    {
        int c = 0;
        for (const auto& [deg, cnt] : jdm.degree_counts) {
            auto [begin, end] = b.ranges[c];
            for (int v = begin; v < end; ++v) {
                b.klass[v] = c;
                b.residual[v] = deg;
                b.bucket_insert(v);
            }
            ++c;
        }
    }

    const std::int64_t budget = 10 * jdm.edge_count();
    std::int64_t switches = 0;

    for (const auto& [key, cnt] : jdm.edges) {
        auto [k, l] = key;
        if (cnt == 0) continue;
        int ck = class_of_degree.at(k), cl = class_of_degree.at(l);
        for (std::int64_t e = 0; e < cnt; ++e) {
            for (;;) {
                int u = b.pick_free(ck, [](int) { return true; });
                if (u < 0) throw GenerationError("degree class ran out of stubs");
                int v = b.pick_free(cl, [&](int x) { return x != u && !b.adj[u].count(x); });
                if (v >= 0) {
                    b.add_edge(u, v);
                    b.consume_stub(u);
                    b.consume_stub(v);
                    break;
                }
                if (++switches > budget)
                    throw GenerationError("rewiring budget exhausted after " +
                                          std::to_string(budget) + " switches");
                if (b.try_switch(u, cl)) break;
            }
        }
    }

    for (int v = 0; v < b.n; ++v)
        if (b.residual[v] != 0) throw GenerationError("unplaced stubs after construction");

    std::vector<Edge> edges;
    for (int u = 0; u < b.n; ++u)
        for (int v : b.adj[u])
            if (u < v) edges.emplace_back(u, v);
    return Graph::from_edges(b.n, edges);
}

}  // namespace netfit
