#include <gtest/gtest.h>

#include <sstream>

#include "blossom_lp/errors.hpp"
#include "blossom_lp/graph.hpp"
#include "fixtures.hpp"

namespace blossom_lp {
namespace {

TEST(ParseInstanceTest, TwoTriangles) {
    const WeightedGraph g = load_instance(std::string(BLOSSOM_LP_TEST_DATA) + "/t6.dimacs");
    EXPECT_EQ(g.vertex_count(), 6);
    ASSERT_EQ(g.edge_count(), 7);
    EXPECT_EQ(g.edge(6), (Edge{6, 2, 3, 10}));
    EXPECT_EQ(g.find_edge(3, 2), 6);
    EXPECT_EQ(g.find_edge(0, 5), -1);
    EXPECT_EQ(g.min_weight(), 1);
    EXPECT_EQ(g, testing::two_triangles());
}

TEST(ParseInstanceTest, CommentsAndBlankLines) {
    const WeightedGraph g = parse_instance_string("c hello\n\np edge 2 1\nc between\ne 2 1 -4\n");
    ASSERT_EQ(g.edge_count(), 1);
    EXPECT_EQ(g.edge(0).weight, -4);
}

void expect_parse_error(const std::string& text, const std::string& fragment) {
    try {
        parse_instance_string(text);
        FAIL() << "no error for: " << text;
    } catch (const SolverError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

TEST(ParseInstanceTest, Errors) {
    expect_parse_error("p edge 2 2\ne 1 2 1\ne 2 1 3\n", "line 3: duplicate edge (2,1)");
    expect_parse_error("p edge 2 1\ne 1 1 1\n", "self-loop");
    expect_parse_error("p edge 2 1\ne 1 3 1\n", "out of range");
    expect_parse_error("p edge 2 2\ne 1 2 1\n", "line 1: declared 2");
    expect_parse_error("e 1 2 1\n", "line 1");
    expect_parse_error("p edge 2 1\ne 1 2\n", "line 2");
    expect_parse_error("", "missing problem line");
}

TEST(WeightedGraphTest, AddEdgeValidation) {
    WeightedGraph g(3);
    EXPECT_EQ(g.add_edge(0, 1, 4), 0);
    EXPECT_THROW(g.add_edge(1, 0, 4), SolverError);
    EXPECT_THROW(g.add_edge(2, 2, 1), SolverError);
    EXPECT_THROW(g.add_edge(0, 3, 1), SolverError);
    EXPECT_THROW(WeightedGraph(0), SolverError);
}

TEST(PrintInstanceTest, RoundTrip) {
    const WeightedGraph g = testing::k4();
    EXPECT_EQ(parse_instance_string(print_instance_string(g)), g);
    const std::string text = print_instance_string(testing::single_edge());
    EXPECT_EQ(text, "p edge 2 1\ne 1 2 5\n");
}

TEST(NoiseSourceTest, MatchesStandardEngine) {
    NoiseSource first(5489);
    EXPECT_EQ(first.below(1 << 20), 437926u);

    NoiseSource again(5489);
    EXPECT_EQ(again.below(1000), 30u);

    NoiseSource late(5489);
    std::uint64_t draw = 0;
    for (int i = 0; i < 10000; ++i) draw = late.below(1 << 20);
    EXPECT_EQ(draw, 972914u);
}

TEST(NoiseSourceTest, StaysBelowBound) {
    NoiseSource rng(3);
    for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 1}) {
        for (int i = 0; i < 200; ++i) EXPECT_LT(rng.below(bound), bound);
    }
}

TEST(PerturbTest, ScaleAndNoise) {
    const WeightedGraph g = testing::two_triangles();
    const PerturbedGraph p = perturb(g, 0);
    EXPECT_EQ(p.weight_shift, 0);
    EXPECT_EQ(p.scale, 7340033);
    ASSERT_EQ(p.noise.size(), 7u);
    for (const Edge& e : g.edges()) {
        const std::uint64_t r = p.noise[static_cast<std::size_t>(e.id)];
        EXPECT_LT(r, kDefaultNoiseRange);
        EXPECT_EQ(p.weight(e.id), Dyadic(mpz_class(e.weight) * p.scale + mpz_class(static_cast<unsigned long>(r))));
    }
}

TEST(PerturbTest, ShiftsNonPositiveWeights) {
    const WeightedGraph g = parse_instance_string("p edge 4 3\ne 1 2 -3\ne 3 4 0\ne 1 3 2\n");
    const PerturbedGraph p = perturb(g, 9, 4);
    EXPECT_EQ(p.weight_shift, 4);
    EXPECT_EQ(p.scale, 13);
    for (const Edge& e : g.edges()) {
        EXPECT_GT(p.weight(e.id), Dyadic(0));
    }
    EXPECT_EQ(p.weight(0), Dyadic(13 + static_cast<long>(p.noise[0])));
}

TEST(PerturbTest, DeterministicPerSeed) {
    const WeightedGraph g = testing::k4();
    EXPECT_EQ(perturb(g, 11).noise, perturb(g, 11).noise);
    EXPECT_NE(perturb(g, 11).noise, perturb(g, 12).noise);
}

TEST(PerturbTest, NoiseNeverReordersDistinctBaseWeights) {
    // sum of all noise < scale, so one unit of base weight dominates.
    NoiseSource rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const WeightedGraph g = testing::planted_graph(rng, 8, 600, 10);
        const PerturbedGraph p = perturb(g, static_cast<std::uint64_t>(trial));
        mpz_class total = 0;
        for (std::uint64_t r : p.noise) total += mpz_class(static_cast<unsigned long>(r));
        EXPECT_LT(total, p.scale);
    }
}

TEST(PerturbTest, RejectsZeroRange) {
    EXPECT_THROW(perturb(testing::k4(), 0, 0), SolverError);
}

}  // namespace
}  // namespace blossom_lp
