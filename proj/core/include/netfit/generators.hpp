#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netfit/graph.hpp"

namespace netfit {

enum class ModelId { CBA, FF, SBM, TWO_K };

inline constexpr std::array<ModelId, 4> kAllModels{ModelId::TWO_K, ModelId::CBA, ModelId::FF,
                                                   ModelId::SBM};

std::string_view model_name(ModelId id);
ModelId model_from_name(std::string_view name);

struct ModelParams {
    ModelId model_id = ModelId::CBA;
    int n_target = 0;
    int cba_m = 1;          // edges per arrival
    double cba_p = 0.0;     // triad-formation probability
    double ff_burn_p = 0.0; // burn probability
    int sbm_blocks = 1;
    std::uint64_t seed = 0;
};

// A generated graph could not be completed from the given randomness
// (e.g. the rewiring budget ran out).
class GenerationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Preferential attachment from an m-clique with probabilistic triad
// formation after the first link of each arrival.
Graph generate_cba(int n, int m, double p, std::uint64_t seed);

// Each arrival links to a uniform ambassador and burns breadth-first:
// every burned node links a Geometric(1-burn_p) number of untouched
// neighbors to the arrival.
Graph generate_ff(int n, double burn_p, std::uint64_t seed);

struct BlockPartition {
    int blocks = 0;
    std::vector<int> block_of;
    // B x B row-major; diagonal holds twice the internal edge count, so
    // every row sums to that block's total degree
    std::vector<std::int64_t> edge_counts;
    std::vector<int> degrees;

    std::int64_t count(int r, int s) const { return edge_counts[static_cast<std::size_t>(r) * blocks + s]; }
    std::int64_t& count(int r, int s) { return edge_counts[static_cast<std::size_t>(r) * blocks + s]; }
};

// Deterministic fixed-B descent on the degree-corrected description length:
// degree-sorted contiguous initialization, then best-single-move sweeps in
// node order until no strict improvement (at most 100 sweeps).
BlockPartition fit_sbm_partition(const Graph& g, int B);

// Microcanonical degree-corrected entropy of the partition, in nats.
double sbm_description_length(const BlockPartition& p);

// Stub-matched edges per block pair, degree-proportional within blocks.
// Raw list may contain loops and duplicates; sample_dcsbm simplifies.
std::vector<Edge> sample_dcsbm_edges(const BlockPartition& p, std::uint64_t seed);
Graph sample_dcsbm(const BlockPartition& p, std::uint64_t seed);

struct JointDegreeMatrix {
    // (k, l) with k <= l -> number of edges joining a degree-k node to a
    // degree-l node
    std::map<std::pair<int, int>, std::int64_t> edges;
    std::map<int, int> degree_counts;

    std::int64_t node_count() const;
    std::int64_t edge_count() const;
    bool operator==(const JointDegreeMatrix&) const = default;
};

JointDegreeMatrix extract_jdm(const Graph& g);

// Throws std::invalid_argument when stub accounting or class capacities
// make the matrix unrealizable.
void validate_jdm(const JointDegreeMatrix& jdm);

// Builds a simple graph reproducing the matrix exactly: nodes grouped into
// degree classes, edges placed between least-saturated nodes, collisions
// resolved by neighbor-switch rewiring.  Throws GenerationError when the
// switch budget (10 * edge count) runs out.
Graph construct_2k(const JointDegreeMatrix& jdm, std::uint64_t seed);

}  // namespace netfit
