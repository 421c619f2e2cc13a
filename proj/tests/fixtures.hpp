#pragma once

#include <string>
#include <utility>
#include <vector>

#include "blossom_lp/graph.hpp"

namespace blossom_lp::testing {

// Two unit triangles {1,2,3} and {4,5,6} joined by edge (3,4) of weight 10.
inline WeightedGraph two_triangles() {
    return parse_instance_string(
        "p edge 6 7\n"
        "e 1 2 1\ne 2 3 1\ne 1 3 1\n"
        "e 4 5 1\ne 5 6 1\ne 4 6 1\n"
        "e 3 4 10\n");
}

inline WeightedGraph single_edge() { return parse_instance_string("p edge 2 1\ne 1 2 5\n"); }

inline WeightedGraph k4() {
    return parse_instance_string(
        "p edge 4 6\n"
        "e 1 2 1\ne 3 4 1\ne 1 3 2\ne 2 4 2\ne 1 4 3\ne 2 3 3\n");
}

// Random graph on n vertices (n even) with a planted perfect matching.
// Non-planted pairs are kept with probability density_permille / 1000.
inline WeightedGraph planted_graph(NoiseSource& rng, int n, int density_permille, int max_weight) {
    WeightedGraph g(n);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        std::swap(perm[static_cast<std::size_t>(i)], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }
    std::vector<std::vector<char>> planted(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; i += 2) {
        const int a = perm[static_cast<std::size_t>(i)];
        const int b = perm[static_cast<std::size_t>(i) + 1];
        planted[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
        planted[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
    }
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const bool keep = rng.below(1000) < static_cast<std::uint64_t>(density_permille);
            const auto w = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_weight))) + 1;
            if (planted[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] || keep) {
                g.add_edge(u, v, w);
            }
        }
    }
    return g;
}

}  // namespace blossom_lp::testing
