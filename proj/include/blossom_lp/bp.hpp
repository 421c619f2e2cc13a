#pragma once

#include <cstdint>
#include <vector>

#include "blossom_lp/contraction.hpp"
#include "blossom_lp/numeric.hpp"
#include "blossom_lp/relax.hpp"

namespace blossom_lp {

enum class FactorMode { Exact2, AtLeast2 };

// One binary variable per copy of a contracted edge. Copy 0 carries the
// edge weight with secondary cost 0, copy 1 the same weight with secondary
// cost 1, so that on a half edge the first copy is strictly preferred.
struct BpVariable {
    int edge = 0;  // contracted edge id
    int copy = 0;  // 0 or 1
    TieBreakCost cost;
    int factors[2] = {0, 0};  // node indices of the two endpoints
    int slots[2] = {0, 0};    // position of this variable in each factor's list
};

struct BpFactor {
    NodeId node;
    FactorMode mode = FactorMode::Exact2;
    std::vector<int> variables;
};

struct FactorGraph {
    std::vector<BpVariable> variables;
    std::vector<BpFactor> factors;
};

/// Throws Infeasible when some node has no incident edge.
FactorGraph build_gm(const ContractedGraph& cg);

// A normalized min-sum message m(1) - m(0). PlusInf forces the variable to
// 0 and MinusInf forces it to 1.
struct MessageDelta {
    enum class Kind : std::uint8_t { Finite, PlusInf, MinusInf };
    Kind kind = Kind::Finite;
    TieBreakCost value;

    static MessageDelta finite(TieBreakCost v) { return {Kind::Finite, std::move(v)}; }
    static MessageDelta plus_inf() { return {Kind::PlusInf, {}}; }
    static MessageDelta minus_inf() { return {Kind::MinusInf, {}}; }

    bool is_finite() const { return kind == Kind::Finite; }
    friend bool operator==(const MessageDelta& a, const MessageDelta& b) {
        return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
    }
};

/// Sum of message differences. Throws Infeasible on +inf plus -inf.
MessageDelta combine(const MessageDelta& a, const MessageDelta& b);

/// Outgoing messages of one factor: element i is the message to the
/// variable whose incoming difference is incoming[i], computed from all
/// other incoming differences. Throws Infeasible when no assignment of the
/// others satisfies the factor.
std::vector<MessageDelta> factor_messages(FactorMode mode, const std::vector<MessageDelta>& incoming);

/// Message to a single target; `others` excludes the target.
MessageDelta factor_to_variable(FactorMode mode, const std::vector<MessageDelta>& others);

enum class BpDecision : std::uint8_t { Zero, One, Tie };

struct MinSumResult {
    std::vector<BpDecision> decisions;
    int rounds = 0;
    int period = 0;  // 0 when the decoded assignment settled on its own
};

struct MinSumOptions {
    int max_rounds = 10000;
    int stable_window = 0;  // 0: factor count + 5
    int threads = 1;
};

/// Synchronous min-sum until the decoded assignment has been identical for
/// `stable_window` rounds. Throws NonConvergence at the round cap and
/// NonUnique when the stable assignment contains a tie.
///
/// On half edges the weight part of the beliefs keeps oscillating and only
/// the tie-break part moves. Once the weight part of the whole message state
/// repeats exactly with period p and the tie-break part advances by the same
/// amount every p rounds for `stable_window` rounds, each variable is decided
/// on its belief summed over one period.
MinSumResult run_min_sum(const FactorGraph& fg, const MinSumOptions& options);

/// x_e = z(e, copy 0) + z(e, copy 1). Throws Internal when the assignment
/// violates a node constraint.
HalfIntegralSolution decode_half(const ContractedGraph& cg, const FactorGraph& fg,
                                 const std::vector<BpDecision>& decisions);

HalfIntegralSolution bp_backend(const ContractedGraph& cg, const BpConfig& cfg, int* rounds = nullptr);

}  // namespace blossom_lp
