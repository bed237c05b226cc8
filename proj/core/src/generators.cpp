#include "netfit/generators.hpp"

#include <algorithm>

#include "netfit/rng.hpp"

namespace netfit {

std::string_view model_name(ModelId id) {
    switch (id) {
        case ModelId::CBA: return "CBA";
        case ModelId::FF: return "FF";
        case ModelId::SBM: return "SBM";
        case ModelId::TWO_K: return "2K";
    }
    throw std::invalid_argument("unknown model id");
}

ModelId model_from_name(std::string_view name) {
    for (ModelId id : kAllModels)
        if (model_name(id) == name) return id;
    throw std::invalid_argument("unknown model name: " + std::string(name));
}

Graph generate_cba(int n, int m, double p, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("cba needs m >= 1");
    if (n <= m) throw std::invalid_argument("cba needs n > m");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("cba triad probability outside [0,1]");

    Rng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m) * (m - 1) / 2 + static_cast<std::size_t>(m) * (n - m));
    std::vector<std::vector<int>> adj(n);
    auto add_edge = [&](int u, int v) {
        edges.emplace_back(u, v);
        adj[u].push_back(v);
        adj[v].push_back(u);
    };

    // attachment pool: every node id appears once per incident edge
    std::vector<int> pool;
    for (int u = 0; u < m; ++u)
        for (int v = u + 1; v < m; ++v) add_edge(u, v);
    for (int u = 0; u < m; ++u)
        for (int k = 1; k < m; ++k) pool.push_back(u);

    std::vector<int> linked;
    std::vector<int> candidates;
    for (int t = m; t < n; ++t) {
        const std::size_t pool_frozen = pool.size();  // arrivals do not attach to themselves
        linked.clear();
        auto is_linked = [&](int v) {
            return std::find(linked.begin(), linked.end(), v) != linked.end();
        };
        auto uniform_unlinked = [&] {
            candidates.clear();
            for (int v = 0; v < t; ++v)
                if (!is_linked(v)) candidates.push_back(v);
            return candidates[rng.index(candidates.size())];
        };
        auto preferential = [&] {
            if (pool_frozen == 0) return uniform_unlinked();
            for (int attempt = 0; attempt < 100; ++attempt) {
                int v = pool[rng.below(pool_frozen)];
                if (!is_linked(v)) return v;
            }
            return uniform_unlinked();
        };

        int prev = preferential();
        for (int e = 0; e < m; ++e) {
            int target = prev;
            if (e > 0) {
                target = -1;
                if (rng.bernoulli(p)) {
                    candidates.clear();
                    for (int v : adj[prev])
                        if (v != t && !is_linked(v)) candidates.push_back(v);
                    if (!candidates.empty()) target = candidates[rng.index(candidates.size())];
                }
                if (target < 0) target = preferential();
            }
            add_edge(t, target);
            linked.push_back(target);
            pool.push_back(target);
            pool.push_back(t);
            prev = target;
        }
    }
    return Graph::from_edges(n, edges);
}

Graph generate_ff(int n, double burn_p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("forest fire needs n >= 2");
    if (burn_p < 0.0 || burn_p >= 1.0)
        throw std::invalid_argument("burn probability must lie in [0,1)");

    Rng rng(seed);
    std::vector<Edge> edges;
    std::vector<std::vector<int>> adj(n);
    std::vector<int> touched_at(n, -1);
    std::vector<int> queue;
    std::vector<int> candidates;

    auto link = [&](int t, int w) {
        touched_at[w] = t;
        edges.emplace_back(t, w);
        adj[t].push_back(w);
        adj[w].push_back(t);
    };

    for (int t = 1; t < n; ++t) {
        int ambassador = static_cast<int>(rng.below(static_cast<std::uint64_t>(t)));
        touched_at[t] = t;
        link(t, ambassador);
        queue.assign(1, ambassador);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int u = queue[head];
            candidates.clear();
            for (int v : adj[u])
                if (touched_at[v] != t) candidates.push_back(v);
            std::size_t burn = 0;
            while (burn < candidates.size() && rng.uniform() < burn_p) ++burn;
            for (std::size_t i = 0; i < burn; ++i) {
                std::swap(candidates[i],
                          candidates[i + rng.below(static_cast<std::uint64_t>(candidates.size() - i))]);
                int w = candidates[i];
                link(t, w);
                queue.push_back(w);
            }
        }
    }
    return Graph::from_edges(n, edges);
}

}  // namespace netfit
