#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "blossom_lp/numeric.hpp"

namespace blossom_lp {

struct Edge {
    int id = 0;
    int u = 0;  // 0-based
    int v = 0;
    std::int64_t weight = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected graph. Edge ids are 0..|E|-1 in insertion order.
class WeightedGraph {
public:
    WeightedGraph() = default;
    explicit WeightedGraph(int vertex_count);

    /// Throws SolverError(InvalidArgument) on self-loops, duplicates or
    /// out-of-range endpoints.
    int add_edge(int u, int v, std::int64_t weight);

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }

    /// Edge id joining u and v, or -1.
    int find_edge(int u, int v) const;

    std::int64_t min_weight() const;

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
        return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
    }

private:
    int vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;  // per vertex: incident edge ids
};

/// Reads the `p edge n m` / `e u v w` format (1-based vertices, `c` comments).
WeightedGraph parse_instance(std::istream& in);
WeightedGraph parse_instance_string(const std::string& text);
WeightedGraph load_instance(const std::string& path);

void print_instance(std::ostream& out, const WeightedGraph& g);
std::string print_instance_string(const WeightedGraph& g);

/// Integer-scaled perturbation: W_e = (w_e + shift) * B + r_e with
/// B = |E| * R + 1 and r_e uniform in [0, R). Because sum(r_e) < B, every
/// optimum under W is an optimum under the shifted base weights.
struct PerturbedGraph {
    WeightedGraph base;
    std::uint64_t seed = 0;
    std::uint64_t noise_range = 1;
    std::int64_t weight_shift = 0;  // added to every base weight before scaling
    mpz_class scale;
    std::vector<std::uint64_t> noise;
    std::vector<Dyadic> internal_weight;

    const Dyadic& weight(int edge_id) const {
        return internal_weight[static_cast<std::size_t>(edge_id)];
    }
};

inline constexpr std::uint64_t kDefaultNoiseRange = std::uint64_t{1} << 20;

PerturbedGraph perturb(const WeightedGraph& g, std::uint64_t seed,
                       std::uint64_t noise_range = kDefaultNoiseRange);

/// Uniform draw in [0, bound) from an mt19937_64 stream by rejection, so
/// that the sequence is identical on every platform.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed);
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

}  // namespace blossom_lp
