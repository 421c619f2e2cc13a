#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blossom_lp/contraction.hpp"
#include "blossom_lp/numeric.hpp"

namespace blossom_lp {

/// Per contracted edge, x in half-units: 0, 1 or 2 for 0, 1/2, 1.
/// The objective is (sum w_e x_e, number of x_e = 1 edges): the cost of the
/// cheapest edge-doubled point that realises x under the copy tie-break.
struct HalfIntegralSolution {
    std::vector<std::uint8_t> half_units;
    TieBreakCost objective;

    bool is_integral() const;
    friend bool operator==(const HalfIntegralSolution& a, const HalfIntegralSolution& b) {
        return a.half_units == b.half_units && a.objective == b.objective;
    }
};

TieBreakCost solution_objective(const ContractedGraph& cg, const std::vector<std::uint8_t>& half_units);

enum class Backend { BeliefPropagation, Enumerate };

std::string_view to_string(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

struct BpConfig {
    int max_rounds = 10000;
    std::optional<int> stable_window;  // default |V-dagger| + 5
    int threads = 1;
};

struct RelaxConfig {
    Backend backend = Backend::BeliefPropagation;
    std::size_t enumerate_limit = 16;
    BpConfig bp;
};

struct RelaxStats {
    int bp_rounds = 0;
};

/// Unique optimum of the contracted relaxation. Throws SolverError with
/// Infeasible, NonUnique or NonConvergence.
HalfIntegralSolution solve_relaxation(const ContractedGraph& cg, const RelaxConfig& cfg,
                                      RelaxStats* stats = nullptr);

/// Exhaustive search over {0,1,2}^|E| with per-node pruning.
HalfIntegralSolution enumerate_backend(const ContractedGraph& cg, std::size_t limit = 16);

struct HalfValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
    std::vector<int> violating_nodes;          // node indices
    std::vector<int> violating_edges;          // contracted edge ids
    std::vector<std::vector<int>> half_cycles; // contracted edge ids in cyclic order
};

HalfValidationReport validate_half_integral(const ContractedGraph& cg, const HalfIntegralSolution& x);

struct Terminate {};
struct Expand {
    NodeId blossom;
};
struct Contract {
    std::vector<int> node_indices;  // cyclic order
    std::vector<int> edge_ids;      // [i] joins node_indices[i] and [i+1 mod len]
};
using StepDecision = std::variant<Terminate, Expand, Contract>;

std::string_view decision_name(const StepDecision& d);

/// Terminate if integral and perfect; else expand the lowest-id blossom
/// node with degree > 1; else contract the half cycle through the lowest
/// half edge id.
StepDecision classify(const ContractedGraph& cg, const HalfIntegralSolution& x);

/// Half-cycles of x, each starting at its lowest edge id and walking from
/// that edge's first endpoint. Empty optional when the half support is not
/// a union of disjoint cycles.
std::optional<std::vector<Contract>> half_cycles(const ContractedGraph& cg,
                                                 const std::vector<std::uint8_t>& half_units);

}  // namespace blossom_lp
