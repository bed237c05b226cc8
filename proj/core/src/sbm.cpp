#include <algorithm>
#include <cmath>
#include <numeric>

#include "netfit/generators.hpp"
#include "netfit/rng.hpp"

namespace netfit {
namespace {

// x ln x with the h(0) = 0 limit
double h(std::int64_t x) {
    return x <= 0 ? 0.0 : static_cast<double>(x) * std::log(static_cast<double>(x));
}

constexpr double kMoveGain = 1e-9;
constexpr int kMaxSweeps = 100;

// The partition objective: maximizing F = (1/2) sum_rs h(e_rs) - sum_r h(k_r)
// minimizes the degree-corrected description length.
struct FitState {
    int B;
    std::vector<std::int64_t> e;      // B x B, diagonal doubled
    std::vector<std::int64_t> kappa;  // per-block degree sums

    std::int64_t& at(int r, int s) { return e[static_cast<std::size_t>(r) * B + s]; }
    std::int64_t at(int r, int s) const { return e[static_cast<std::size_t>(r) * B + s]; }
};

// Gain of moving a node of degree d from block a to block b, where nbr[t]
// counts its neighbors in block t.
double move_gain(const FitState& st, int a, int b, int d, const std::vector<std::int64_t>& nbr,
                 const std::vector<int>& touched) {
    double delta = 0.0;
    for (int t : touched) {
        if (t == a || t == b) continue;
        std::int64_t k = nbr[t];
        delta += h(st.at(a, t) - k) - h(st.at(a, t));
        delta += h(st.at(b, t) + k) - h(st.at(b, t));
    }
    std::int64_t ka = nbr[a], kb = nbr[b];
    delta += h(st.at(a, b) + ka - kb) - h(st.at(a, b));
    delta += 0.5 * (h(st.at(a, a) - 2 * ka) - h(st.at(a, a)));
    delta += 0.5 * (h(st.at(b, b) + 2 * kb) - h(st.at(b, b)));
    delta -= h(st.kappa[a] - d) - h(st.kappa[a]);
    delta -= h(st.kappa[b] + d) - h(st.kappa[b]);
    return delta;
}

}  // namespace

BlockPartition fit_sbm_partition(const Graph& g, int B) {
    const int n = g.node_count();
    if (B < 1 || B > n) throw std::invalid_argument("block count must lie in [1, n]");

    BlockPartition out;
    out.blocks = B;
    out.block_of.resize(n);
    out.degrees.resize(n);
    for (int v = 0; v < n; ++v) out.degrees[v] = g.degree(v);

    // contiguous slices of the degree-sorted node order
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return out.degrees[a] != out.degrees[b] ? out.degrees[a] < out.degrees[b] : a < b;
    });
    for (int i = 0; i < n; ++i)
        out.block_of[order[i]] = static_cast<int>(static_cast<std::int64_t>(i) * B / n);

    FitState st;
    st.B = B;
    st.e.assign(static_cast<std::size_t>(B) * B, 0);
    st.kappa.assign(B, 0);
    for (int u = 0; u < n; ++u) {
        st.kappa[out.block_of[u]] += out.degrees[u];
        for (int v : g.neighbors(u)) st.at(out.block_of[u], out.block_of[v]) += 1;
    }

    if (B > 1) {
        std::vector<std::int64_t> nbr(B, 0);
        std::vector<int> touched;
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            bool moved = false;
            for (int v = 0; v < n; ++v) {
                const int a = out.block_of[v];
                const int d = out.degrees[v];
                touched.clear();
                for (int w : g.neighbors(v)) {
                    int t = out.block_of[w];
                    if (nbr[t] == 0) touched.push_back(t);
                    ++nbr[t];
                }
                int best_b = -1;
                double best_gain = kMoveGain;
                for (int b = 0; b < B; ++b) {
                    if (b == a) continue;
                    double gain = move_gain(st, a, b, d, nbr, touched);
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_b = b;
                    }
                }
                if (best_b >= 0) {
                    const int b = best_b;
                    for (int t : touched) {
                        if (t == a || t == b) continue;
                        std::int64_t k = nbr[t];
                        st.at(a, t) -= k;
                        st.at(t, a) -= k;
                        st.at(b, t) += k;
                        st.at(t, b) += k;
                    }
                    std::int64_t ka = nbr[a], kb = nbr[b];
                    st.at(a, b) += ka - kb;
                    st.at(b, a) += ka - kb;
                    st.at(a, a) -= 2 * ka;
                    st.at(b, b) += 2 * kb;
                    st.kappa[a] -= d;
                    st.kappa[b] += d;
                    out.block_of[v] = b;
                    moved = true;
                }
                for (int t : touched) nbr[t] = 0;
            }
            if (!moved) break;
        }
    }

    out.edge_counts = std::move(st.e);
    return out;
}

double sbm_description_length(const BlockPartition& p) {
    std::int64_t m2 = 0;
    double f = 0.0;
    for (int r = 0; r < p.blocks; ++r) {
        std::int64_t kappa = 0;
        for (int s = 0; s < p.blocks; ++s) {
            f += 0.5 * h(p.count(r, s));
            kappa += p.count(r, s);
        }
        f -= h(kappa);
        m2 += kappa;
    }
    double log_deg_fact = 0.0;
    for (int d : p.degrees) log_deg_fact += std::lgamma(static_cast<double>(d) + 1.0);
    return -static_cast<double>(m2) / 2.0 - log_deg_fact - f;
}

namespace {

void validate_partition(const BlockPartition& p) {
    const int B = p.blocks;
    if (B < 1 || p.edge_counts.size() != static_cast<std::size_t>(B) * B)
        throw std::invalid_argument("malformed block partition");
    if (p.block_of.size() != p.degrees.size())
        throw std::invalid_argument("malformed block partition");
    std::vector<std::int64_t> kappa(B, 0);
    for (std::size_t v = 0; v < p.block_of.size(); ++v) {
        int b = p.block_of[v];
        if (b < 0 || b >= B) throw std::invalid_argument("node assigned outside the block range");
        if (p.degrees[v] < 0) throw std::invalid_argument("negative degree");
        kappa[b] += p.degrees[v];
    }
    for (int r = 0; r < B; ++r) {
        if (p.count(r, r) % 2 != 0)
            throw std::invalid_argument("diagonal edge counts must be even");
        std::int64_t row = 0;
        for (int s = 0; s < B; ++s) {
            if (p.count(r, s) < 0) throw std::invalid_argument("negative edge count");
            if (p.count(r, s) != p.count(s, r))
                throw std::invalid_argument("edge count matrix must be symmetric");
            row += p.count(r, s);
        }
        if (row != kappa[r])
            throw std::invalid_argument("edge counts inconsistent with block degrees");
    }
}

}  // namespace

std::vector<Edge> sample_dcsbm_edges(const BlockPartition& p, std::uint64_t seed) {
    validate_partition(p);
    const int B = p.blocks;
    const int n = static_cast<int>(p.block_of.size());

    // degree-cumulative member lists per block for proportional stub picks
    std::vector<std::vector<int>> members(B);
    std::vector<std::vector<std::int64_t>> cumdeg(B);
    for (int v = 0; v < n; ++v) members[p.block_of[v]].push_back(v);
    std::vector<std::int64_t> total(B, 0);
    for (int r = 0; r < B; ++r) {
        cumdeg[r].reserve(members[r].size());
        for (int v : members[r]) {
            total[r] += p.degrees[v];
            cumdeg[r].push_back(total[r]);
        }
    }

    Rng rng(seed);
    auto pick = [&](int r) {
        std::int64_t x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total[r])));
        std::size_t i = std::upper_bound(cumdeg[r].begin(), cumdeg[r].end(), x) - cumdeg[r].begin();
        return members[r][i];
    };

    std::vector<Edge> edges;
    for (int r = 0; r < B; ++r) {
        for (int s = r; s < B; ++s) {
            std::int64_t count = r == s ? p.count(r, r) / 2 : p.count(r, s);
            for (std::int64_t e = 0; e < count; ++e) edges.emplace_back(pick(r), pick(s));
        }
    }
    return edges;
}

Graph sample_dcsbm(const BlockPartition& p, std::uint64_t seed) {
    auto edges = sample_dcsbm_edges(p, seed);
    return Graph::from_edges(static_cast<int>(p.block_of.size()), edges);
}

}  // namespace netfit
