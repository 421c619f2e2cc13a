#include "blossom_lp/contraction.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "blossom_lp/errors.hpp"
#include "blossom_lp/relax.hpp"

namespace blossom_lp {

std::string NodeId::label() const {
    return is_blossom() ? "b" + std::to_string(index) : std::to_string(index + 1);
}

SolverState::SolverState(const PerturbedGraph& graph)
    : graph_(&graph), vertex_parent_(static_cast<std::size_t>(graph.base.vertex_count()), -1) {}

const BlossomRecord& SolverState::blossom(int id) const {
    if (id < 0 || id >= static_cast<int>(blossoms_.size())) {
        throw SolverError(ErrorKind::InvalidArgument, "unknown blossom b" + std::to_string(id));
    }
    return blossoms_[static_cast<std::size_t>(id)];
}

bool SolverState::is_live(NodeId node) const {
    if (!node.is_blossom()) return node.index >= 0 && node.index < graph_->base.vertex_count();
    return node.index >= 0 && node.index < static_cast<int>(blossoms_.size()) &&
           blossoms_[static_cast<std::size_t>(node.index)].alive;
}

std::optional<int> SolverState::parent_of(NodeId node) const {
    if (node.is_blossom()) return blossom(node.index).parent;
    const int p = vertex_parent_.at(static_cast<std::size_t>(node.index));
    return p < 0 ? std::nullopt : std::optional<int>(p);
}

bool SolverState::is_outer(NodeId node) const {
    return is_live(node) && !parent_of(node).has_value();
}

NodeId SolverState::outer_of(int v) const {
    NodeId node = NodeId::vertex(v);
    while (auto p = parent_of(node)) node = NodeId::blossom(*p);
    return node;
}

std::vector<int> SolverState::vertices_of(NodeId node) const {
    std::vector<int> out;
    std::vector<NodeId> stack{node};
    while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        if (!n.is_blossom()) {
            out.push_back(n.index);
            continue;
        }
        for (const NodeId& child : blossom(n.index).cycle) stack.push_back(child);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> SolverState::outer_nodes() const {
    std::vector<NodeId> out;
    for (int v = 0; v < graph_->base.vertex_count(); ++v) {
        if (vertex_parent_[static_cast<std::size_t>(v)] < 0) out.push_back(NodeId::vertex(v));
    }
    for (const BlossomRecord& b : blossoms_) {
        if (b.alive && !b.parent) out.push_back(NodeId::blossom(b.id));
    }
    return out;
}

std::vector<int> SolverState::live_blossom_ids() const {
    std::vector<int> out;
    for (const BlossomRecord& b : blossoms_) {
        if (b.alive) out.push_back(b.id);
    }
    return out;
}

int SolverState::nesting_depth() const {
    int depth = 0;
    for (const BlossomRecord& b : blossoms_) {
        if (!b.alive) continue;
        int d = 1;
        for (auto p = b.parent; p; p = blossoms_[static_cast<std::size_t>(*p)].parent) ++d;
        depth = std::max(depth, d);
    }
    return depth;
}

int ContractedGraph::index_of(NodeId node) const {
    const auto it = std::find(nodes.begin(), nodes.end(), node);
    return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

int ContractedGraph::other_end(int e, int node_index) const {
    const ContractedEdge& edge = edges[static_cast<std::size_t>(e)];
    return edge.a_index == node_index ? edge.b_index : edge.a_index;
}

bool operator==(const ContractedGraph& a, const ContractedGraph& b) {
    if (a.nodes != b.nodes || a.edges.size() != b.edges.size()) return false;
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        const ContractedEdge& x = a.edges[i];
        const ContractedEdge& y = b.edges[i];
        if (x.id != y.id || x.a != y.a || x.b != y.b || x.original != y.original ||
            !(x.w_dagger == y.w_dagger)) {
            return false;
        }
    }
    return true;
}

ContractedGraph build_contracted(const SolverState& state) {
    const PerturbedGraph& pg = state.graph();
    const int n = pg.base.vertex_count();

    // Per vertex: outer representative and the y sum along the hidden chain.
    std::vector<NodeId> outer(static_cast<std::size_t>(n));
    std::vector<Dyadic> chain_sum(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        NodeId node = NodeId::vertex(v);
        Dyadic sum;
        while (auto p = state.parent_of(node)) {
            const auto it = state.y_store().find(node);
            if (it == state.y_store().end()) {
                throw SolverError(ErrorKind::Internal, "hidden node " + node.label() + " has no stored y");
            }
            sum += it->second;
            node = NodeId::blossom(*p);
        }
        outer[static_cast<std::size_t>(v)] = node;
        chain_sum[static_cast<std::size_t>(v)] = std::move(sum);
    }

    ContractedGraph cg;
    cg.nodes = state.outer_nodes();
    cg.incident.resize(cg.nodes.size());
    std::map<NodeId, int> index;
    for (std::size_t i = 0; i < cg.nodes.size(); ++i) index[cg.nodes[i]] = static_cast<int>(i);

    for (const Edge& e : pg.base.edges()) {
        const NodeId a = outer[static_cast<std::size_t>(e.u)];
        const NodeId b = outer[static_cast<std::size_t>(e.v)];
        if (a == b) continue;
        ContractedEdge ce;
        ce.id = cg.edge_count();
        ce.a = a;
        ce.b = b;
        ce.a_index = index.at(a);
        ce.b_index = index.at(b);
        ce.original = e.id;
        ce.w_dagger = pg.weight(e.id) - chain_sum[static_cast<std::size_t>(e.u)] -
                      chain_sum[static_cast<std::size_t>(e.v)];
        cg.incident[static_cast<std::size_t>(ce.a_index)].push_back(ce.id);
        cg.incident[static_cast<std::size_t>(ce.b_index)].push_back(ce.id);
        cg.edges.push_back(std::move(ce));
    }
    return cg;
}

std::vector<Dyadic> cycle_duals(const std::vector<Dyadic>& w_dagger) {
    const int len = static_cast<int>(w_dagger.size());
    std::vector<Dyadic> y(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        Dyadic sum;
        for (int j = 0; j < len; ++j) {
            // Edge j joins nodes j and j+1; edges i and i-1 touch node i.
            const int forward = ((j - i) % len + len) % len;
            const int backward = ((i - 1 - j) % len + len) % len;
            const int distance = std::min(forward, backward);
            if (distance % 2 == 0) {
                sum += w_dagger[static_cast<std::size_t>(j)];
            } else {
                sum -= w_dagger[static_cast<std::size_t>(j)];
            }
        }
        y[static_cast<std::size_t>(i)] = sum.halved();
    }
    return y;
}

NodeId contract_cycle(SolverState& state, const std::vector<NodeId>& cycle_nodes,
                      const std::vector<int>& cycle_edges, const std::vector<Dyadic>& w_dagger) {
    const std::size_t len = cycle_nodes.size();
    if (len < 3) throw SolverError(ErrorKind::InvalidArgument, "cycle shorter than 3");
    if (len % 2 == 0) throw SolverError(ErrorKind::InvalidArgument, "even cycle cannot form a blossom");
    if (cycle_edges.size() != len || w_dagger.size() != len) {
        throw SolverError(ErrorKind::InvalidArgument, "cycle edge list length mismatch");
    }
    std::set<NodeId> seen;
    for (const NodeId& node : cycle_nodes) {
        if (!state.is_outer(node)) {
            throw SolverError(ErrorKind::InvalidArgument, "node " + node.label() + " is not outer");
        }
        if (!seen.insert(node).second) {
            throw SolverError(ErrorKind::InvalidArgument, "node " + node.label() + " repeated in cycle");
        }
    }
    const WeightedGraph& g = state.graph().base;
    for (std::size_t i = 0; i < len; ++i) {
        const int id = cycle_edges[i];
        if (id < 0 || id >= g.edge_count()) {
            throw SolverError(ErrorKind::InvalidArgument, "unknown edge id " + std::to_string(id));
        }
        const Edge& e = g.edge(id);
        const NodeId a = state.outer_of(e.u);
        const NodeId b = state.outer_of(e.v);
        const NodeId p = cycle_nodes[i];
        const NodeId q = cycle_nodes[(i + 1) % len];
        if (!((a == p && b == q) || (a == q && b == p))) {
            throw SolverError(ErrorKind::InvalidArgument,
                              "edge " + std::to_string(id) + " does not join " + p.label() + " and " + q.label());
        }
    }

    const std::vector<Dyadic> y = cycle_duals(w_dagger);
    BlossomRecord record;
    record.id = static_cast<int>(state.blossoms_.size());
    record.cycle = cycle_nodes;
    record.cycle_edges = cycle_edges;
    for (std::size_t i = 0; i < len; ++i) {
        const NodeId& node = cycle_nodes[i];
        if (node.is_blossom()) {
            state.blossoms_[static_cast<std::size_t>(node.index)].parent = record.id;
        } else {
            state.vertex_parent_[static_cast<std::size_t>(node.index)] = record.id;
        }
        state.y_store_[node] = y[i];
    }
    const NodeId id = NodeId::blossom(record.id);
    state.blossoms_.push_back(std::move(record));
    return id;
}

void expand_blossom(SolverState& state, NodeId blossom) {
    if (!blossom.is_blossom()) throw SolverError(ErrorKind::InvalidArgument, blossom.label() + " is not a blossom");
    if (!state.is_live(blossom)) throw SolverError(ErrorKind::InvalidArgument, blossom.label() + " is not live");
    if (!state.is_outer(blossom)) throw SolverError(ErrorKind::InvalidArgument, blossom.label() + " is not outer");
    BlossomRecord& record = state.blossoms_[static_cast<std::size_t>(blossom.index)];
    record.alive = false;
    for (const NodeId& child : record.cycle) {
        if (child.is_blossom()) {
            state.blossoms_[static_cast<std::size_t>(child.index)].parent.reset();
        } else {
            state.vertex_parent_[static_cast<std::size_t>(child.index)] = -1;
        }
        state.y_store_.erase(child);
    }
}

std::vector<int> recover_matching(const SolverState& state, const ContractedGraph& cg,
                                  const HalfIntegralSolution& x) {
    const WeightedGraph& g = state.graph().base;
    if (x.half_units.size() != cg.edges.size()) {
        throw SolverError(ErrorKind::Internal, "solution size does not match contracted graph");
    }
    std::vector<int> degree(cg.nodes.size(), 0);
    std::vector<int> matching;
    std::vector<char> covered(static_cast<std::size_t>(g.vertex_count()), 0);

    auto take = [&](int original) {
        const Edge& e = g.edge(original);
        for (int v : {e.u, e.v}) {
            if (covered[static_cast<std::size_t>(v)]) {
                throw SolverError(ErrorKind::Internal, "vertex " + std::to_string(v + 1) + " covered twice during recovery");
            }
            covered[static_cast<std::size_t>(v)] = 1;
        }
        matching.push_back(original);
    };

    for (const ContractedEdge& e : cg.edges) {
        const auto value = x.half_units[static_cast<std::size_t>(e.id)];
        if (value == 1) throw SolverError(ErrorKind::Internal, "recovery needs an integral solution");
        if (value == 2) {
            ++degree[static_cast<std::size_t>(e.a_index)];
            ++degree[static_cast<std::size_t>(e.b_index)];
            take(e.original);
        }
    }
    for (std::size_t i = 0; i < degree.size(); ++i) {
        if (degree[i] != 1) {
            throw SolverError(ErrorKind::Internal, "node " + cg.nodes[i].label() + " has solution degree " +
                                                       std::to_string(degree[i]));
        }
    }

    std::deque<int> pending;
    for (const NodeId& node : cg.nodes) {
        if (node.is_blossom()) pending.push_back(node.index);
    }
    while (!pending.empty()) {
        const BlossomRecord& s = state.blossom(pending.front());
        pending.pop_front();
        const int len = static_cast<int>(s.cycle.size());
        int covered_child = -1;
        for (int i = 0; i < len; ++i) {
            int count = 0;
            for (int v : state.vertices_of(s.cycle[static_cast<std::size_t>(i)])) count += covered[static_cast<std::size_t>(v)];
            if (count == 0) continue;
            if (count > 1 || covered_child >= 0) {
                throw SolverError(ErrorKind::Internal, "blossom b" + std::to_string(s.id) + " has more than one covered child");
            }
            covered_child = i;
        }
        if (covered_child < 0) {
            throw SolverError(ErrorKind::Internal, "blossom b" + std::to_string(s.id) + " has no covered child");
        }
        // The remaining children form an even path; match them pairwise.
        for (int step = 1; step < len; step += 2) {
            take(s.cycle_edges[static_cast<std::size_t>((covered_child + step) % len)]);
        }
        for (const NodeId& child : s.cycle) {
            if (child.is_blossom()) pending.push_back(child.index);
        }
    }
    std::sort(matching.begin(), matching.end());
    return matching;
}

}  // namespace blossom_lp
