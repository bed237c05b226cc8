#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netfit/metrics.hpp"

namespace netfit {

inline constexpr std::array<std::string_view, 3> kDomains{"friendship", "communication",
                                                          "collaboration"};

bool is_domain(std::string_view name);

// 1-based average ranks, ties sharing the mean of their positions.
std::vector<double> fractional_ranks(std::span<const double> x);

// Rank correlation; empty when either input is constant.  Inputs must be
// finite, equal length, at least 3 values.
std::optional<double> try_spearman(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

struct MetricTable {
    std::vector<MetricVector> rows;
    std::vector<std::string> domains;  // one label per row
};

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<double> values;  // row-major; NaN marks undefined entries
    std::size_t size() const { return names.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * names.size() + j]; }
};

// Per-domain |spearman| of every metric pair over pairwise-complete rows,
// averaged across the domains where the pair is defined.
CorrelationMatrix domain_avg_correlation(const MetricTable& table);

struct CorrelationNetwork {
    std::vector<std::string> nodes;
    struct Link {
        int a = 0, b = 0;  // indexes into nodes, a < b
        double weight = 0.0;
    };
    std::vector<Link> links;
    double threshold = 0.0;
};

// Links exactly where the matrix entry strictly exceeds the threshold.
CorrelationNetwork build_correlation_network(const CorrelationMatrix& matrix, double threshold);

// Drops the size seeds and their neighbors, then picks a greedy maximal
// independent set (min degree first, ties by name); result sorted by name.
MetricSelection select_metrics(const CorrelationNetwork& network,
                               std::span<const std::string> size_seeds);
MetricSelection select_metrics(const CorrelationNetwork& network);

struct CanberraResult {
    double distance = 0.0;
    int skipped = 0;  // slots where either side was NaN
};

// Sum of |x-y|/(|x|+|y|) over unmasked slots; 0/0 slots contribute 0.
CanberraResult canberra(std::span<const double> x, std::span<const double> y);

}  // namespace netfit
