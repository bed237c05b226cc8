#include "netfit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace netfit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

bool is_domain(std::string_view name) {
    return std::find(kDomains.begin(), kDomains.end(), name) != kDomains.end();
}

std::vector<double> fractional_ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> try_spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman inputs differ in length");
    if (x.size() < 3) throw std::invalid_argument("spearman needs at least 3 observations");
    auto constant = [](std::span<const double> s) {
        return std::all_of(s.begin(), s.end(), [&](double v) { return v == s[0]; });
    };
    if (constant(x) || constant(y)) return std::nullopt;
    auto rx = fractional_ranks(x);
    auto ry = fractional_ranks(y);
    return pearson(rx, ry);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    auto rho = try_spearman(x, y);
    if (!rho) throw std::invalid_argument("spearman undefined for a constant sequence");
    return *rho;
}

CorrelationMatrix domain_avg_correlation(const MetricTable& table) {
    if (table.rows.size() != table.domains.size())
        throw std::invalid_argument("metric table rows and domain labels differ in length");
    for (const auto& d : table.domains)
        if (!is_domain(d)) throw std::invalid_argument("unknown domain label: " + d);

    std::vector<std::vector<std::size_t>> groups;
    for (auto dom : kDomains) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < table.domains.size(); ++r)
            if (table.domains[r] == dom) rows.push_back(r);
        if (rows.empty()) continue;
        if (rows.size() < 3)
            throw std::invalid_argument("domain " + std::string(dom) +
                                        " has fewer than 3 networks");
        groups.push_back(std::move(rows));
    }
    if (groups.empty()) throw std::invalid_argument("metric table is empty");

    const std::size_t k = kMetricNames.size();
    CorrelationMatrix out;
    out.names.assign(kMetricNames.begin(), kMetricNames.end());
    out.values.assign(k * k, kNaN);

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double acc = 0.0;
            int defined = 0;
            for (const auto& rows : groups) {
                xs.clear();
                ys.clear();
                for (std::size_t r : rows) {
                    double a = table.rows[r].value(out.names[i]);
                    double b = table.rows[r].value(out.names[j]);
                    if (std::isfinite(a) && std::isfinite(b)) {
                        xs.push_back(a);
                        ys.push_back(b);
                    }
                }
                if (xs.size() < 3) continue;
                auto rho = try_spearman(xs, ys);
                if (rho) {
                    acc += std::abs(*rho);
                    ++defined;
                }
            }
            double entry = defined > 0 ? acc / defined : kNaN;
            out.at(i, j) = entry;
            out.at(j, i) = entry;
        }
    }
    return out;
}

CorrelationNetwork build_correlation_network(const CorrelationMatrix& matrix, double threshold) {
    if (threshold < 0.0 || threshold > 1.0)
        throw std::invalid_argument("correlation threshold must lie in [0,1]");
    const std::size_t k = matrix.size();
    if (matrix.values.size() != k * k)
        throw std::invalid_argument("correlation matrix is not square");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double a = matrix.at(i, j), b = matrix.at(j, i);
            bool same = (std::isnan(a) && std::isnan(b)) || a == b;
            if (!same) throw std::invalid_argument("correlation matrix is not symmetric");
        }

    CorrelationNetwork net;
    net.nodes = matrix.names;
    net.threshold = threshold;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (matrix.at(i, j) > threshold)
                net.links.push_back({static_cast<int>(i), static_cast<int>(j), matrix.at(i, j)});
    return net;
}

MetricSelection select_metrics(const CorrelationNetwork& network,
                               std::span<const std::string> size_seeds) {
    std::unordered_map<std::string_view, int> index;
    for (std::size_t i = 0; i < network.nodes.size(); ++i)
        index.emplace(network.nodes[i], static_cast<int>(i));
    const int n = static_cast<int>(network.nodes.size());

    std::vector<std::set<int>> adj(n);
    for (const auto& link : network.links) {
        adj[link.a].insert(link.b);
        adj[link.b].insert(link.a);
    }

    std::vector<bool> alive(n, true);
    for (const auto& seed : size_seeds) {
        auto it = index.find(seed);
        if (it == index.end())
            throw std::invalid_argument("size seed is not a network node: " + seed);
        alive[it->second] = false;
        for (int nb : adj[it->second]) alive[nb] = false;
    }
    if (std::none_of(alive.begin(), alive.end(), [](bool a) { return a; }))
        throw std::runtime_error("all metrics size-dependent");

    MetricSelection selection;
    for (;;) {
        int best = -1;
        std::size_t best_deg = 0;
        for (int v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            std::size_t deg = 0;
            for (int nb : adj[v])
                if (alive[nb]) ++deg;
            if (best < 0 || deg < best_deg ||
                (deg == best_deg && network.nodes[v] < network.nodes[best])) {
                best = v;
                best_deg = deg;
            }
        }
        if (best < 0) break;
        selection.push_back(network.nodes[best]);
        alive[best] = false;
        for (int nb : adj[best]) alive[nb] = false;
    }
    std::sort(selection.begin(), selection.end());
    return selection;
}

MetricSelection select_metrics(const CorrelationNetwork& network) {
    const std::vector<std::string> seeds{"num_nodes", "num_edges"};
    return select_metrics(network, seeds);
}

CanberraResult canberra(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("canberra inputs differ in length");
    if (x.empty()) throw std::invalid_argument("canberra needs at least one component");
    CanberraResult out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) {
            ++out.skipped;
            continue;
        }
        double den = std::abs(x[i]) + std::abs(y[i]);
        if (den > 0.0) out.distance += std::abs(x[i] - y[i]) / den;
    }
    return out;
}

}  // namespace netfit
