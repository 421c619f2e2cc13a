#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blossom_lp/contraction.hpp"
#include "blossom_lp/graph.hpp"
#include "blossom_lp/relax.hpp"

namespace blossom_lp {

inline constexpr int kOracleVertexLimit = 22;

struct DpMatching {
    std::vector<int> matching;  // sorted edge ids
    std::int64_t weight = 0;    // base weights
    bool unique = true;
};

/// Exact minimum-weight perfect matching by subset DP over base weights.
/// Empty when no perfect matching exists. Throws InvalidArgument above
/// kOracleVertexLimit vertices.
std::optional<DpMatching> exact_mwpm_dp(const WeightedGraph& g);

struct PerturbedDpMatching {
    std::vector<int> matching;
    Dyadic weight;  // under the internal weights W
    bool unique = true;
};

/// Same DP over the perturbed internal weights.
std::optional<PerturbedDpMatching> exact_mwpm_dp(const PerturbedGraph& g);

/// Endpoint view shared by original and contracted graphs.
struct EdgeView {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> endpoints;
};

EdgeView edge_view(const WeightedGraph& g);
EdgeView edge_view(const ContractedGraph& cg);

/// Odd cycles, claws (stars) and a matching; edge ids refer to an EdgeView.
struct Decomposition {
    std::vector<std::vector<int>> cycles;
    std::vector<std::vector<int>> claws;
    std::vector<int> matching;
};

struct DecompositionReport {
    bool valid = true;
    std::vector<std::string> violations;
    std::vector<std::size_t> claw_sizes;  // vertices per claw, center included
};

DecompositionReport validate_decomposition(const EdgeView& g, const Decomposition& d);

/// Half edges become cycles, integral edges at blossom nodes of degree > 1
/// become claws centered there, the rest is the matching. Throws Internal
/// when the half support is not a union of disjoint cycles.
Decomposition half_solution_to_decomposition(const ContractedGraph& cg, const HalfIntegralSolution& x);

}  // namespace blossom_lp
