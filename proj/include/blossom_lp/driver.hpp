#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blossom_lp/contraction.hpp"
#include "blossom_lp/errors.hpp"
#include "blossom_lp/graph.hpp"
#include "blossom_lp/relax.hpp"

namespace blossom_lp {

struct SolveConfig {
    Backend backend = Backend::BeliefPropagation;
    std::uint64_t seed = 0;
    std::uint64_t noise_range = kDefaultNoiseRange;
    std::optional<long> max_outer_iterations;  // default 10 * |V|^2
    BpConfig bp;
    std::size_t enumerate_limit = 16;
    int retry_limit = 8;
    bool trace = false;
};

/// One outer iteration: the relaxation on G-dagger and the step it led to.
struct IterationRecord {
    int iteration = 0;
    int nodes = 0;
    int edges = 0;
    std::vector<std::uint8_t> half_units;
    std::string objective;  // decimal primary part
    std::string decision;   // "terminate" | "expand" | "contract"
    std::optional<int> blossom;
    std::vector<std::string> cycle;  // node labels
    std::vector<std::string> y;      // stored duals of the cycle members
    std::vector<std::size_t> claws;  // vertices per claw, center included
    int bp_rounds = 0;
};

struct MatchingResult {
    std::vector<int> matching;  // sorted original edge ids
    std::int64_t weight = 0;    // sum of base weights
    int outer_iterations = 0;
    int contractions = 0;
    int expansions = 0;
    long bp_rounds_total = 0;
    std::uint64_t seed_used = 0;
    int attempts = 0;
    std::vector<IterationRecord> trace;
};

/// Read-only view handed to an observer after each relaxation is classified
/// and before the step is applied.
struct IterationView {
    int attempt = 0;
    int iteration = 0;
    const SolverState& state;
    const ContractedGraph& contracted;
    const HalfIntegralSolution& solution;
    const StepDecision& decision;
};

/// Called after a contraction with the new blossom and the weights of its
/// cycle edges at contraction time.
struct ContractionView {
    const SolverState& state;
    NodeId blossom;
    const std::vector<Dyadic>& cycle_weights;
};

struct SolveObserver {
    std::function<void(const IterationView&)> on_iteration;
    std::function<void(const ContractionView&)> on_contract;
    std::function<void(const SolverError&, int attempt)> on_retry;
    /// Called when the relaxation backend throws, before the error propagates.
    std::function<void(const ContractedGraph&, const SolverError&)> on_relaxation_error;
};

/// Blossom-LP outer loop. Throws SolverError: Infeasible, NonUnique or
/// NonConvergence once retries are exhausted, IterationBudgetExceeded.
MatchingResult solve_mwpm(const WeightedGraph& g, const SolveConfig& cfg, const SolveObserver* observer = nullptr);

struct VerificationReport {
    bool ok = true;
    std::vector<std::string> violations;
    std::optional<std::int64_t> oracle_weight;  // when the oracle ran
};

/// Coverage, membership and weight checks; compares against the subset DP
/// oracle when |V| <= oracle_limit.
VerificationReport verify_matching(const WeightedGraph& g, const std::vector<int>& matching,
                                   std::optional<std::int64_t> claimed_weight, int oracle_limit = 22);
VerificationReport verify_result(const WeightedGraph& g, const MatchingResult& r, int oracle_limit = 22);

}  // namespace blossom_lp
