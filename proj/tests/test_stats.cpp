#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "netfit/rng.hpp"
#include "netfit/stats.hpp"

using namespace netfit;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// rank by sorting copies, averaging tie runs
std::vector<double> naive_ranks(const std::vector<double>& x) {
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::size_t below = 0, equal = 0;
        for (double v : x) {
            if (v < x[i]) ++below;
            if (v == x[i]) ++equal;
        }
        ranks[i] = below + (equal + 1) / 2.0;
    }
    return ranks;
}

double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = x.size(), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    return static_cast<double>((n * sxy - sx * sy) /
                               std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

CorrelationNetwork random_network(Rng& rng, int k, double p) {
    CorrelationNetwork net;
    for (int i = 0; i < k; ++i) net.nodes.push_back("m" + std::to_string(10 + i));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (rng.uniform() < p) net.links.push_back({i, j, 0.7 + 0.3 * rng.uniform()});
    return net;
}

// every maximal independent set of the network, as sorted name lists
std::vector<std::vector<std::string>> maximal_independent_sets(const CorrelationNetwork& net) {
    const int k = static_cast<int>(net.nodes.size());
    std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
    for (const auto& link : net.links) adj[link.a][link.b] = adj[link.b][link.a] = 1;

    std::vector<std::vector<std::string>> result;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        bool independent = true;
        for (int i = 0; i < k && independent; ++i)
            for (int j = i + 1; j < k && independent; ++j)
                if ((mask >> i & 1) && (mask >> j & 1) && adj[i][j]) independent = false;
        if (!independent) continue;
        bool maximal = true;
        for (int v = 0; v < k && maximal; ++v) {
            if (mask >> v & 1) continue;
            bool blocked = false;
            for (int i = 0; i < k; ++i)
                if ((mask >> i & 1) && adj[i][v]) blocked = true;
            if (!blocked) maximal = false;
        }
        if (!maximal) continue;
        std::vector<std::string> names;
        for (int v = 0; v < k; ++v)
            if (mask >> v & 1) names.push_back(net.nodes[v]);
        std::sort(names.begin(), names.end());
        result.push_back(std::move(names));
    }
    return result;
}

MetricVector row(double assort) {
    MetricVector mv;
    mv.assortativity = assort;
    return mv;
}

}  // namespace

TEST_CASE("fractional ranks average tie runs") {
    std::vector<double> x{10, 20, 20, 30};
    CHECK(fractional_ranks(x) == std::vector<double>{1.0, 2.5, 2.5, 4.0});

    std::vector<double> all_tied{5, 5, 5};
    CHECK(fractional_ranks(all_tied) == std::vector<double>{2.0, 2.0, 2.0});

    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v;
        for (int i = 0; i < 40; ++i) v.push_back(static_cast<double>(rng.below(12)));
        CHECK(fractional_ranks(v) == naive_ranks(v));
    }
}

TEST_CASE("spearman equals rank-then-pearson on tied data") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 5 + rng.below(30);
        std::vector<double> x, y;
        for (std::size_t i = 0; i < n; ++i) {
            x.push_back(static_cast<double>(rng.below(8)));
            y.push_back(static_cast<double>(rng.below(8)) + 0.25 * x.back());
        }
        auto rho = try_spearman(x, y);
        if (!rho) continue;
        CHECK(std::abs(*rho - naive_pearson(naive_ranks(x), naive_ranks(y))) <= 1e-12);
        CHECK(*rho >= -1.0 - 1e-12);
        CHECK(*rho <= 1.0 + 1e-12);
    }
}

TEST_CASE("spearman contract errors") {
    std::vector<double> a{1, 2, 3}, b{1, 2};
    CHECK_THROWS_AS(spearman(a, b), std::invalid_argument);
    CHECK_THROWS_AS(spearman(b, b), std::invalid_argument);

    std::vector<double> flat{4, 4, 4}, rising{1, 2, 3};
    CHECK_FALSE(try_spearman(flat, rising).has_value());
    CHECK_THROWS_AS(spearman(flat, rising), std::invalid_argument);

    std::vector<double> exact{1, 2, 3, 4};
    std::vector<double> monotone{10, 20, 25, 70};
    CHECK(spearman(exact, monotone) == doctest::Approx(1.0));
    std::vector<double> reversed{5, 3, 2, 1};
    CHECK(spearman(exact, reversed) == doctest::Approx(-1.0));
}

TEST_CASE("domain averaging uses pairwise-complete rows per domain") {
    MetricTable table;
    auto add = [&](const char* domain, double a, double assort) {
        MetricVector mv;
        mv.avg_clust = a;
        mv.avg_deg = 2 * a + 1;    // perfectly rank-correlated with avg_clust
        mv.density = -3 * a + 50;  // perfectly anti-correlated
        if (!std::isnan(assort)) mv.assortativity = assort;
        table.rows.push_back(mv);
        table.domains.emplace_back(domain);
    };
    add("friendship", 1, 0.3);
    add("friendship", 2, 0.1);
    add("friendship", 3, 0.2);
    add("friendship", 4, kNaN);
    add("communication", 5, kNaN);
    add("communication", 7, kNaN);
    add("communication", 6, kNaN);

    auto m = domain_avg_correlation(table);
    auto idx = [&](std::string_view name) {
        return std::find(m.names.begin(), m.names.end(), name) - m.names.begin();
    };
    // both domains have |rho| = 1 for the linked pairs
    CHECK(m.at(idx("avg_clust"), idx("avg_deg")) == doctest::Approx(1.0));
    CHECK(m.at(idx("avg_clust"), idx("density")) == doctest::Approx(1.0));
    // assortativity defined for 3 friendship rows only, |rho(assort, avg_clust)| = 0.5
    CHECK(m.at(idx("assortativity"), idx("avg_clust")) == doctest::Approx(0.5));
    // idp_1 is constant zero everywhere, so every pairing is undefined
    CHECK(std::isnan(m.at(idx("idp_1"), idx("avg_clust"))));
    // symmetry
    CHECK(m.at(idx("avg_deg"), idx("avg_clust")) == m.at(idx("avg_clust"), idx("avg_deg")));
}

TEST_CASE("domain averaging rejects undersized domains") {
    MetricTable table;
    table.rows.assign(2, row(0.1));
    table.domains = {"friendship", "friendship"};
    CHECK_THROWS_WITH_AS(domain_avg_correlation(table),
                         doctest::Contains("friendship"), std::invalid_argument);

    MetricTable bad_label;
    bad_label.rows.assign(1, row(0.1));
    bad_label.domains = {"office"};
    CHECK_THROWS_AS(domain_avg_correlation(bad_label), std::invalid_argument);

    CHECK_THROWS_AS(domain_avg_correlation(MetricTable{}), std::invalid_argument);
}

TEST_CASE("correlation network links strictly above the threshold") {
    CorrelationMatrix m;
    m.names = {"a", "b", "c"};
    m.values = {1.0, 0.65, kNaN, 0.65, 1.0, 0.9, kNaN, 0.9, 1.0};

    auto net = build_correlation_network(m, 0.65);
    REQUIRE(net.links.size() == 1);  // 0.65 is not > 0.65, NaN never links
    CHECK(net.links[0].a == 1);
    CHECK(net.links[0].b == 2);
    CHECK(net.links[0].weight == doctest::Approx(0.9));

    auto loose = build_correlation_network(m, 0.6);
    CHECK(loose.links.size() == 2);

    // link sets shrink monotonically with the threshold
    for (double t : {0.0, 0.3, 0.8, 1.0}) {
        auto lo = build_correlation_network(m, t).links.size();
        for (double u : {0.85, 0.95, 1.0}) {
            if (u < t) continue;
            CHECK(build_correlation_network(m, u).links.size() <= lo);
        }
    }

    CHECK_THROWS_AS(build_correlation_network(m, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(build_correlation_network(m, 1.5), std::invalid_argument);

    CorrelationMatrix lopsided = m;
    lopsided.values[1] = 0.2;
    CHECK_THROWS_AS(build_correlation_network(lopsided, 0.5), std::invalid_argument);
}

TEST_CASE("greedy selection is a maximal independent set") {
    Rng rng(314);
    for (int trial = 0; trial < 50; ++trial) {
        int k = 4 + static_cast<int>(rng.below(9));
        auto net = random_network(rng, k, 0.15 + 0.5 * rng.uniform());
        auto picked = select_metrics(net, std::span<const std::string>{});
        auto all = maximal_independent_sets(net);
        CHECK(std::find(all.begin(), all.end(), picked) != all.end());
        CHECK(std::is_sorted(picked.begin(), picked.end()));

        auto again = select_metrics(net, std::span<const std::string>{});
        CHECK(again == picked);
    }
}

TEST_CASE("size seeds and their neighbors never enter the selection") {
    CorrelationNetwork net;
    net.nodes = {"avg_clust", "avg_deg", "max_deg", "num_edges", "num_nodes"};
    auto link = [&](int a, int b) { net.links.push_back({a, b, 0.9}); };
    link(3, 2);  // num_edges - max_deg
    link(4, 1);  // num_nodes - avg_deg
    link(0, 1);  // avg_clust - avg_deg

    auto picked = select_metrics(net);
    CHECK(picked == std::vector<std::string>{"avg_clust"});

    CorrelationNetwork everything;
    everything.nodes = {"avg_clust", "num_edges", "num_nodes"};
    everything.links.push_back({0, 1, 0.99});
    CHECK_THROWS_AS(select_metrics(everything), std::runtime_error);

    CorrelationNetwork missing_seed;
    missing_seed.nodes = {"avg_clust"};
    CHECK_THROWS_AS(select_metrics(missing_seed), std::invalid_argument);
}

TEST_CASE("canberra sums component-wise relative differences") {
    std::vector<double> x{1, 0, 3}, y{2, 0, 3};
    auto r = canberra(x, y);
    CHECK(r.distance == doctest::Approx(1.0 / 3.0));  // 0/0 contributes nothing
    CHECK(r.skipped == 0);

    std::vector<double> with_nan{1, kNaN, 3}, other{1, 5, kNaN};
    auto s = canberra(with_nan, other);
    CHECK(s.distance == doctest::Approx(0.0));
    CHECK(s.skipped == 2);

    std::vector<double> neg{-1, 2}, pos{1, 2};
    CHECK(canberra(neg, pos).distance == doctest::Approx(1.0));

    CHECK_THROWS_AS(canberra(std::vector<double>{}, std::vector<double>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(canberra(x, std::vector<double>{1.0}), std::invalid_argument);

    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 10; ++i) {
            a.push_back(rng.uniform() * 4 - 2);
            b.push_back(rng.uniform() * 4 - 2);
        }
        auto ab = canberra(a, b), ba = canberra(b, a), aa = canberra(a, a);
        CHECK(ab.distance == doctest::Approx(ba.distance));
        CHECK(aa.distance == doctest::Approx(0.0));
        CHECK(ab.distance >= 0.0);
        CHECK(ab.distance <= 10.0 + 1e-9);
    }
}
