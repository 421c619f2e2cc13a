#include <gtest/gtest.h>

#include <algorithm>

#include "blossom_lp/contraction.hpp"
#include "blossom_lp/errors.hpp"
#include "blossom_lp/relax.hpp"
#include "fixtures.hpp"

namespace blossom_lp {
namespace {

Dyadic half_of(long v) { return Dyadic(v).halved(); }

NodeId V(int one_based) { return NodeId::vertex(one_based - 1); }

// Contracts the cycle through the given nodes using the contracted edges
// joining consecutive nodes, exactly as the driver does.
NodeId contract_nodes(SolverState& state, const std::vector<NodeId>& nodes) {
    const ContractedGraph cg = build_contracted(state);
    std::vector<int> originals;
    std::vector<Dyadic> weights;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeId a = nodes[i];
        const NodeId b = nodes[(i + 1) % nodes.size()];
        const auto it = std::find_if(cg.edges.begin(), cg.edges.end(), [&](const ContractedEdge& e) {
            return (e.a == a && e.b == b) || (e.a == b && e.b == a);
        });
        if (it == cg.edges.end()) throw std::logic_error("no edge between cycle neighbours");
        originals.push_back(it->original);
        weights.push_back(it->w_dagger);
    }
    return contract_cycle(state, nodes, originals, weights);
}

TEST(CycleDualsTest, UnitTriangle) {
    EXPECT_EQ(cycle_duals({1, 1, 1}), (std::vector<Dyadic>{half_of(1), half_of(1), half_of(1)}));
}

TEST(CycleDualsTest, SkewTriangle) {
    EXPECT_EQ(cycle_duals({1, 2, 3}), (std::vector<Dyadic>{1, 0, 2}));
}

TEST(CycleDualsTest, FiveCycle) {
    EXPECT_EQ(cycle_duals({2, 2, 2, 2, 2}), (std::vector<Dyadic>{1, 1, 1, 1, 1}));
}

TEST(CycleDualsTest, TightOnRandomCycles) {
    NoiseSource rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = 3 + 2 * rng.below(4);
        std::vector<Dyadic> w;
        for (std::size_t i = 0; i < len; ++i) {
            w.push_back(Dyadic(mpz_class(static_cast<unsigned long>(rng.below(1000))), static_cast<unsigned>(rng.below(3))));
        }
        const auto y = cycle_duals(w);
        for (std::size_t i = 0; i < len; ++i) EXPECT_EQ(y[i] + y[(i + 1) % len], w[i]);
    }
}

TEST(BuildContractedTest, EmptyFamilyIsTheGraph) {
    const PerturbedGraph pg = perturb(testing::two_triangles(), 4);
    const SolverState state(pg);
    const ContractedGraph cg = build_contracted(state);
    ASSERT_EQ(cg.node_count(), 6);
    ASSERT_EQ(cg.edge_count(), 7);
    for (const ContractedEdge& e : cg.edges) {
        EXPECT_EQ(e.original, e.id);
        EXPECT_EQ(e.w_dagger, pg.weight(e.original));
    }
}

TEST(BuildContractedTest, TwoTrianglesOneContracted) {
    const PerturbedGraph pg = perturb(testing::two_triangles(), 0, 1);  // B = 8, no noise
    SolverState state(pg);
    const NodeId b = contract_nodes(state, {V(1), V(2), V(3)});
    EXPECT_EQ(b, NodeId::blossom(0));
    for (int v = 1; v <= 3; ++v) EXPECT_EQ(state.y_store().at(V(v)), Dyadic(4));

    const ContractedGraph cg = build_contracted(state);
    EXPECT_EQ(cg.nodes, (std::vector<NodeId>{V(4), V(5), V(6), b}));
    ASSERT_EQ(cg.edge_count(), 4);
    const auto bridge = std::find_if(cg.edges.begin(), cg.edges.end(), [](const auto& e) { return e.original == 6; });
    ASSERT_NE(bridge, cg.edges.end());
    EXPECT_EQ(bridge->w_dagger, half_of(19 * 8));
}

TEST(BuildContractedTest, TwoTrianglesBothContracted) {
    const PerturbedGraph pg = perturb(testing::two_triangles(), 0, 1);
    SolverState state(pg);
    contract_nodes(state, {V(1), V(2), V(3)});
    contract_nodes(state, {V(4), V(5), V(6)});
    const ContractedGraph cg = build_contracted(state);
    EXPECT_EQ(cg.node_count(), 2);
    ASSERT_EQ(cg.edge_count(), 1);
    EXPECT_EQ(cg.edges[0].w_dagger, Dyadic(72));
    EXPECT_TRUE(cg.is_blossom(0));
}

TEST(BuildContractedTest, KeepsParallelEdges) {
    // Both (1,4) and (3,4) survive as parallel edges between b0 and 4.
    const WeightedGraph g = parse_instance_string("p edge 4 5\ne 1 2 1\ne 2 3 1\ne 1 3 1\ne 1 4 5\ne 3 4 6\n");
    const PerturbedGraph pg = perturb(g, 0, 1);
    SolverState state(pg);
    const NodeId b = contract_nodes(state, {V(1), V(2), V(3)});
    const ContractedGraph cg = build_contracted(state);
    ASSERT_EQ(cg.edge_count(), 2);
    for (const ContractedEdge& e : cg.edges) {
        EXPECT_TRUE((e.a == b && e.b == V(4)) || (e.a == V(4) && e.b == b));
    }
    EXPECT_NE(cg.edges[0].original, cg.edges[1].original);
}

TEST(ContractCycleTest, TightAfterContraction) {
    NoiseSource rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const WeightedGraph g = testing::planted_graph(rng, 6, 1000, 50);
        const PerturbedGraph pg = perturb(g, static_cast<std::uint64_t>(trial));
        SolverState state(pg);
        contract_nodes(state, {V(1), V(2), V(3)});
        const NodeId outer = contract_nodes(state, {NodeId::blossom(0), V(4), V(5)});
        const BlossomRecord& rec = state.blossom(outer.index);
        // Every cycle edge of the outer blossom, re-evaluated with the cycle
        // members as the outer nodes, is tight.
        for (std::size_t i = 0; i < rec.cycle.size(); ++i) {
            const Edge& e = g.edge(rec.cycle_edges[i]);
            Dyadic w = pg.weight(e.id);
            for (int end : {e.u, e.v}) {
                if (end < 3) w -= state.y_store().at(NodeId::vertex(end));
            }
            const NodeId a = rec.cycle[i];
            const NodeId b = rec.cycle[(i + 1) % rec.cycle.size()];
            EXPECT_EQ(w - state.y_store().at(a) - state.y_store().at(b), Dyadic(0)) << "trial " << trial;
        }
    }
}

TEST(ContractCycleTest, Errors) {
    const PerturbedGraph pg = perturb(testing::two_triangles(), 0, 1);
    SolverState state(pg);
    EXPECT_THROW(contract_cycle(state, {V(1), V(2)}, {0, 0}, {8, 8}), SolverError);
    EXPECT_THROW(contract_cycle(state, {V(1), V(2), V(3), V(4)}, {0, 1, 6, 5}, {8, 8, 80, 8}), SolverError);
    EXPECT_THROW(contract_cycle(state, {V(1), V(2), V(1)}, {0, 0, 2}, {8, 8, 8}), SolverError);
    EXPECT_THROW(contract_cycle(state, {V(1), V(2), V(3)}, {0, 3, 2}, {8, 8, 8}), SolverError);
    contract_nodes(state, {V(1), V(2), V(3)});
    EXPECT_THROW(contract_cycle(state, {V(1), V(4), V(5)}, {6, 3, 4}, {8, 8, 8}), SolverError);
}

TEST(ExpandBlossomTest, InverseOfContract) {
    const PerturbedGraph pg = perturb(testing::two_triangles(), 3);
    SolverState state(pg);
    const ContractedGraph before = build_contracted(state);
    const NodeId b = contract_nodes(state, {V(1), V(2), V(3)});
    expand_blossom(state, b);
    EXPECT_TRUE(state.y_store().empty());
    EXPECT_TRUE(state.live_blossom_ids().empty());
    EXPECT_EQ(build_contracted(state), before);
}

TEST(ExpandBlossomTest, NestedKeepsInnerDuals) {
    const WeightedGraph g = parse_instance_string(
        "p edge 5 6\ne 1 2 1\ne 2 3 1\ne 1 3 1\ne 3 4 2\ne 4 5 2\ne 5 1 2\n");
    const PerturbedGraph pg = perturb(g, 0, 1);  // B = 7
    SolverState state(pg);
    const NodeId inner = contract_nodes(state, {V(1), V(2), V(3)});
    const NodeId outer = contract_nodes(state, {inner, V(4), V(5)});
    EXPECT_EQ(state.y_store().at(inner), half_of(7));
    EXPECT_EQ(state.y_store().at(V(4)), Dyadic(7));
    EXPECT_EQ(state.y_store().at(V(5)), Dyadic(7));
    EXPECT_EQ(state.nesting_depth(), 2);
    EXPECT_EQ(state.outer_of(1), outer);
    EXPECT_EQ(state.vertices_of(outer), (std::vector<int>{0, 1, 2, 3, 4}));
    EXPECT_EQ(state.parent_of(inner), outer.index);
    EXPECT_FALSE(state.is_outer(inner));

    EXPECT_THROW(expand_blossom(state, inner), SolverError);
    expand_blossom(state, outer);
    EXPECT_EQ(state.y_store().count(inner), 0u);
    EXPECT_EQ(state.y_store().count(V(4)), 0u);
    for (int v = 1; v <= 3; ++v) EXPECT_EQ(state.y_store().at(V(v)), half_of(7));
    EXPECT_TRUE(state.is_outer(inner));
    EXPECT_THROW(expand_blossom(state, outer), SolverError);
}

TEST(ExpandBlossomTest, RandomContractExpandRestores) {
    NoiseSource rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const WeightedGraph g = testing::planted_graph(rng, 8, 1000, 100);
        const PerturbedGraph pg = perturb(g, static_cast<std::uint64_t>(trial));
        SolverState state(pg);
        contract_nodes(state, {V(1), V(2), V(3)});
        const ContractedGraph before = build_contracted(state);
        const auto y_before = state.y_store();
        const NodeId b = contract_nodes(state, {V(4), V(5), V(6), V(7), V(8)});
        expand_blossom(state, b);
        EXPECT_EQ(build_contracted(state), before);
        EXPECT_EQ(state.y_store(), y_before);
    }
}

TEST(RecoverMatchingTest, NoBlossoms) {
    const PerturbedGraph pg = perturb(testing::k4(), 0);
    const SolverState state(pg);
    const ContractedGraph cg = build_contracted(state);
    std::vector<std::uint8_t> x{2, 2, 0, 0, 0, 0};
    const HalfIntegralSolution sol{x, solution_objective(cg, x)};
    EXPECT_EQ(recover_matching(state, cg, sol), (std::vector<int>{0, 1}));
}

TEST(RecoverMatchingTest, TwoTrianglesTerminal) {
    const PerturbedGraph pg = perturb(testing::two_triangles(), 0, 1);
    SolverState state(pg);
    contract_nodes(state, {V(1), V(2), V(3)});
    contract_nodes(state, {V(4), V(5), V(6)});
    const ContractedGraph cg = build_contracted(state);
    const std::vector<std::uint8_t> x{2};
    const HalfIntegralSolution sol{x, solution_objective(cg, x)};
    const auto m = recover_matching(state, cg, sol);
    EXPECT_EQ(m, (std::vector<int>{0, 4, 6}));  // (1,2), (5,6), (3,4)
    std::int64_t weight = 0;
    for (int id : m) weight += pg.base.edge(id).weight;
    EXPECT_EQ(weight, 12);
}

TEST(RecoverMatchingTest, FiveCycleMatchedAtFirstChild) {
    // 5-cycle 1..5 plus pendant 6 attached to vertex 1.
    const WeightedGraph g = parse_instance_string(
        "p edge 6 6\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 4 5 1\ne 5 1 1\ne 1 6 1\n");
    const PerturbedGraph pg = perturb(g, 0);
    SolverState state(pg);
    contract_nodes(state, {V(1), V(2), V(3), V(4), V(5)});
    const ContractedGraph cg = build_contracted(state);
    const std::vector<std::uint8_t> x{2};
    const HalfIntegralSolution sol{x, solution_objective(cg, x)};
    EXPECT_EQ(recover_matching(state, cg, sol), (std::vector<int>{1, 3, 5}));  // (2,3), (4,5), (1,6)
}

TEST(RecoverMatchingTest, RejectsNonPerfect) {
    const PerturbedGraph pg = perturb(testing::k4(), 0);
    const SolverState state(pg);
    const ContractedGraph cg = build_contracted(state);
    std::vector<std::uint8_t> x{2, 0, 0, 0, 0, 0};
    const HalfIntegralSolution sol{x, solution_objective(cg, x)};
    EXPECT_THROW(recover_matching(state, cg, sol), SolverError);
}

TEST(NodeIdTest, Labels) {
    EXPECT_EQ(NodeId::vertex(2).label(), "3");
    EXPECT_EQ(NodeId::blossom(0).label(), "b0");
    EXPECT_LT(NodeId::vertex(7), NodeId::blossom(0));
}

}  // namespace
}  // namespace blossom_lp
