#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blossom_lp/graph.hpp"
#include "blossom_lp/numeric.hpp"

namespace blossom_lp {

enum class NodeKind { Vertex, Blossom };

/// Either an original vertex (0-based) or a blossom. Blossom ids are
/// allocated sequentially per solve and never reused.
struct NodeId {
    NodeKind kind = NodeKind::Vertex;
    int index = 0;

    static NodeId vertex(int v) { return {NodeKind::Vertex, v}; }
    static NodeId blossom(int b) { return {NodeKind::Blossom, b}; }

    bool is_blossom() const { return kind == NodeKind::Blossom; }

    /// "3" for vertex index 2 (1-based), "b0" for blossom 0.
    std::string label() const;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct BlossomRecord {
    int id = 0;
    std::vector<NodeId> cycle;     // C(S) in cyclic order, odd length >= 3
    std::vector<int> cycle_edges;  // original edge ids; [i] joins cycle[i] and cycle[i+1 mod len]
    std::optional<int> parent;     // enclosing live blossom
    bool alive = true;
};

/// Laminar blossom family plus stored dual values of hidden nodes.
class SolverState {
public:
    explicit SolverState(const PerturbedGraph& graph);

    const PerturbedGraph& graph() const { return *graph_; }
    const std::vector<BlossomRecord>& blossoms() const { return blossoms_; }
    const BlossomRecord& blossom(int id) const;
    const std::map<NodeId, Dyadic>& y_store() const { return y_store_; }

    bool is_live(NodeId node) const;
    bool is_outer(NodeId node) const;
    std::optional<int> parent_of(NodeId node) const;

    /// Outermost live node containing original vertex v.
    NodeId outer_of(int v) const;

    /// Original vertices inside `node`, ascending.
    std::vector<int> vertices_of(NodeId node) const;

    /// Outer vertices ascending, then outer blossoms by id.
    std::vector<NodeId> outer_nodes() const;

    std::vector<int> live_blossom_ids() const;

    /// Maximum nesting depth of live blossoms (0 when the family is empty).
    int nesting_depth() const;

private:
    friend NodeId contract_cycle(SolverState&, const std::vector<NodeId>&, const std::vector<int>&,
                                 const std::vector<Dyadic>&);
    friend void expand_blossom(SolverState&, NodeId);

    const PerturbedGraph* graph_;
    std::vector<int> vertex_parent_;  // -1 when outer
    std::vector<BlossomRecord> blossoms_;
    std::map<NodeId, Dyadic> y_store_;
};

struct ContractedEdge {
    int id = 0;
    NodeId a;
    NodeId b;
    int a_index = 0;  // position of `a` in ContractedGraph::nodes
    int b_index = 0;
    int original = 0;
    Dyadic w_dagger;
};

/// G-dagger: outer nodes and every original edge between distinct outer
/// nodes (parallel edges kept), with adjusted weights.
struct ContractedGraph {
    std::vector<NodeId> nodes;
    std::vector<ContractedEdge> edges;
    std::vector<std::vector<int>> incident;  // per node index: contracted edge ids

    int index_of(NodeId node) const;
    bool is_blossom(int node_index) const { return nodes[static_cast<std::size_t>(node_index)].is_blossom(); }
    int node_count() const { return static_cast<int>(nodes.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    /// The endpoint of edge `e` that is not `node_index`.
    int other_end(int e, int node_index) const;

    friend bool operator==(const ContractedGraph& a, const ContractedGraph& b);
};

ContractedGraph build_contracted(const SolverState& state);

/// Dual values that make every cycle edge tight:
/// y_v = 1/2 * sum_e (-1)^{d(e,v)} w_e, d the cyclic distance from v to e.
std::vector<Dyadic> cycle_duals(const std::vector<Dyadic>& w_dagger);

/// Adds the odd cycle as a new blossom and stores the duals of its members.
/// `cycle_edges[i]` is the original edge realising hop i -> i+1.
NodeId contract_cycle(SolverState& state, const std::vector<NodeId>& cycle_nodes,
                      const std::vector<int>& cycle_edges, const std::vector<Dyadic>& w_dagger);

/// Removes an outer blossom; its cycle children become outer and lose their
/// stored duals. Entries deeper inside are untouched.
void expand_blossom(SolverState& state, NodeId blossom);

struct HalfIntegralSolution;

/// Step C: lifts an integral perfect solution on G-dagger to a perfect
/// matching of the original graph. Returns sorted original edge ids.
std::vector<int> recover_matching(const SolverState& state, const ContractedGraph& cg,
                                  const HalfIntegralSolution& x);

}  // namespace blossom_lp
