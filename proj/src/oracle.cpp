#include "blossom_lp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "blossom_lp/errors.hpp"

namespace blossom_lp {

namespace {

template <typename Weight>
struct DpOutcome {
    std::vector<int> matching;
    Weight weight{};
    bool unique = true;
};

// Pairs the lowest vertex of each subset with one of its neighbours inside
// the subset. count[] saturates at 2: only uniqueness matters.
template <typename Weight>
std::optional<DpOutcome<Weight>> subset_dp(const WeightedGraph& g, const std::vector<Weight>& weight) {
    const int n = g.vertex_count();
    if (n > kOracleVertexLimit) {
        throw SolverError(ErrorKind::InvalidArgument, "oracle supports at most " +
                                                          std::to_string(kOracleVertexLimit) + " vertices");
    }
    if (n % 2 != 0) return std::nullopt;

    std::vector<std::vector<std::pair<int, int>>> neighbours(static_cast<std::size_t>(n));
    for (const Edge& e : g.edges()) {
        neighbours[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.id);
        neighbours[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.id);
    }

    const std::size_t states = std::size_t{1} << n;
    std::vector<Weight> cost(states);
    std::vector<std::uint8_t> count(states, 0);
    std::vector<int> choice(states, -1);
    count[0] = 1;
    for (std::size_t mask = 1; mask < states; ++mask) {
        if (std::popcount(mask) % 2 != 0) continue;
        const int low = std::countr_zero(mask);
        for (const auto& [other, id] : neighbours[static_cast<std::size_t>(low)]) {
            if (!(mask >> other & 1U)) continue;
            const std::size_t rest = mask & ~(std::size_t{1} << low) & ~(std::size_t{1} << other);
            if (count[rest] == 0) continue;
            Weight candidate = cost[rest] + weight[static_cast<std::size_t>(id)];
            if (count[mask] == 0 || candidate < cost[mask]) {
                cost[mask] = std::move(candidate);
                count[mask] = count[rest];
                choice[mask] = id;
            } else if (candidate == cost[mask]) {
                count[mask] = static_cast<std::uint8_t>(std::min(2, count[mask] + count[rest]));
            }
        }
    }

    const std::size_t full = states - 1;
    if (count[full] == 0) return std::nullopt;
    DpOutcome<Weight> out;
    out.weight = cost[full];
    out.unique = count[full] == 1;
    for (std::size_t mask = full; mask != 0;) {
        const Edge& e = g.edge(choice[mask]);
        out.matching.push_back(e.id);
        mask &= ~(std::size_t{1} << e.u);
        mask &= ~(std::size_t{1} << e.v);
    }
    std::sort(out.matching.begin(), out.matching.end());
    return out;
}

}  // namespace

std::optional<DpMatching> exact_mwpm_dp(const WeightedGraph& g) {
    std::vector<std::int64_t> weight;
    weight.reserve(static_cast<std::size_t>(g.edge_count()));
    for (const Edge& e : g.edges()) weight.push_back(e.weight);
    auto outcome = subset_dp(g, weight);
    if (!outcome) return std::nullopt;
    return DpMatching{std::move(outcome->matching), outcome->weight, outcome->unique};
}

std::optional<PerturbedDpMatching> exact_mwpm_dp(const PerturbedGraph& g) {
    auto outcome = subset_dp(g.base, g.internal_weight);
    if (!outcome) return std::nullopt;
    return PerturbedDpMatching{std::move(outcome->matching), std::move(outcome->weight), outcome->unique};
}

EdgeView edge_view(const WeightedGraph& g) {
    EdgeView view;
    view.vertex_count = g.vertex_count();
    for (const Edge& e : g.edges()) view.endpoints.emplace_back(e.u, e.v);
    return view;
}

EdgeView edge_view(const ContractedGraph& cg) {
    EdgeView view;
    view.vertex_count = cg.node_count();
    for (const ContractedEdge& e : cg.edges) view.endpoints.emplace_back(e.a_index, e.b_index);
    return view;
}

DecompositionReport validate_decomposition(const EdgeView& g, const Decomposition& d) {
    DecompositionReport report;
    auto fail = [&](std::string message) {
        report.valid = false;
        report.violations.push_back(std::move(message));
    };
    std::vector<int> cover(static_cast<std::size_t>(g.vertex_count), 0);
    const int edge_count = static_cast<int>(g.endpoints.size());

    auto check_ids = [&](const std::vector<int>& ids, const char* what) {
        for (int id : ids) {
            if (id < 0 || id >= edge_count) {
                fail(std::string(what) + " references unknown edge " + std::to_string(id));
                return false;
            }
        }
        return true;
    };
    auto endpoints = [&](int id) { return g.endpoints[static_cast<std::size_t>(id)]; };

    for (const auto& cycle : d.cycles) {
        if (!check_ids(cycle, "cycle")) continue;
        std::map<int, int> degree;
        for (int id : cycle) {
            ++degree[endpoints(id).first];
            ++degree[endpoints(id).second];
        }
        if (cycle.size() < 3 || cycle.size() % 2 == 0) {
            fail("cycle of length " + std::to_string(cycle.size()) + " is not odd");
        }
        bool two_regular = degree.size() == cycle.size();
        for (const auto& [v, k] : degree) two_regular = two_regular && k == 2;
        if (!two_regular) fail("cycle edges do not form a simple cycle");
        // Connectivity: walk from the first edge.
        if (two_regular && !cycle.empty()) {
            std::set<int> reached{endpoints(cycle[0]).first};
            bool grew = true;
            while (grew) {
                grew = false;
                for (int id : cycle) {
                    const auto [a, b] = endpoints(id);
                    if (reached.count(a) != reached.count(b)) {
                        reached.insert(a);
                        reached.insert(b);
                        grew = true;
                    }
                }
            }
            if (reached.size() != degree.size()) fail("cycle edges form more than one cycle");
        }
        for (const auto& [v, k] : degree) ++cover[static_cast<std::size_t>(v)];
    }

    for (const auto& claw : d.claws) {
        if (!check_ids(claw, "claw")) continue;
        if (claw.empty()) {
            fail("empty claw");
            continue;
        }
        std::set<int> vertices;
        std::map<int, int> degree;
        for (int id : claw) {
            const auto [a, b] = endpoints(id);
            vertices.insert(a);
            vertices.insert(b);
            ++degree[a];
            ++degree[b];
        }
        const bool centered = std::any_of(degree.begin(), degree.end(), [&](const auto& entry) {
            return entry.second == static_cast<int>(claw.size());
        });
        if (!centered || vertices.size() != claw.size() + 1) fail("claw edges do not share a common center");
        report.claw_sizes.push_back(vertices.size());
        for (int v : vertices) ++cover[static_cast<std::size_t>(v)];
    }

    if (check_ids(d.matching, "matching")) {
        std::vector<int> seen(static_cast<std::size_t>(g.vertex_count), 0);
        for (int id : d.matching) {
            const auto [a, b] = endpoints(id);
            for (int v : {a, b}) {
                if (seen[static_cast<std::size_t>(v)]++) fail("matching covers vertex " + std::to_string(v) + " twice");
                ++cover[static_cast<std::size_t>(v)];
            }
        }
    }

    for (int v = 0; v < g.vertex_count; ++v) {
        const int c = cover[static_cast<std::size_t>(v)];
        if (c == 0) fail("vertex " + std::to_string(v) + " is not covered");
        if (c > 1) fail("vertex " + std::to_string(v) + " lies in more than one set");
    }
    return report;
}

Decomposition half_solution_to_decomposition(const ContractedGraph& cg, const HalfIntegralSolution& x) {
    const auto cycles = half_cycles(cg, x.half_units);
    if (!cycles) throw SolverError(ErrorKind::Internal, "half edges do not form disjoint cycles");

    Decomposition d;
    for (const Contract& c : *cycles) d.cycles.push_back(c.edge_ids);

    std::vector<int> degree(cg.nodes.size(), 0);
    for (const ContractedEdge& e : cg.edges) {
        degree[static_cast<std::size_t>(e.a_index)] += x.half_units[static_cast<std::size_t>(e.id)];
        degree[static_cast<std::size_t>(e.b_index)] += x.half_units[static_cast<std::size_t>(e.id)];
    }
    std::vector<char> assigned(cg.edges.size(), 0);
    for (int i = 0; i < cg.node_count(); ++i) {
        if (!cg.is_blossom(i) || degree[static_cast<std::size_t>(i)] <= 2) continue;
        std::vector<int> claw;
        for (int e : cg.incident[static_cast<std::size_t>(i)]) {
            if (x.half_units[static_cast<std::size_t>(e)] == 2 && !assigned[static_cast<std::size_t>(e)]) {
                claw.push_back(e);
                assigned[static_cast<std::size_t>(e)] = 1;
            }
        }
        if (!claw.empty()) {
            std::sort(claw.begin(), claw.end());
            d.claws.push_back(std::move(claw));
        }
    }
    for (const ContractedEdge& e : cg.edges) {
        if (x.half_units[static_cast<std::size_t>(e.id)] == 2 && !assigned[static_cast<std::size_t>(e.id)]) {
            d.matching.push_back(e.id);
        }
    }
    return d;
}

}  // namespace blossom_lp
