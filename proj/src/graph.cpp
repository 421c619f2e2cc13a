#include "blossom_lp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "blossom_lp/errors.hpp"

namespace blossom_lp {

WeightedGraph::WeightedGraph(int vertex_count)
    : vertex_count_(vertex_count), adjacency_(static_cast<std::size_t>(std::max(vertex_count, 0))) {
    if (vertex_count <= 0) {
        throw SolverError(ErrorKind::InvalidArgument, "vertex count must be positive");
    }
}

int WeightedGraph::add_edge(int u, int v, std::int64_t weight) {
    if (u < 0 || v < 0 || u >= vertex_count_ || v >= vertex_count_) {
        throw SolverError(ErrorKind::InvalidArgument, "endpoint out of range (" +
                                                          std::to_string(u + 1) + "," +
                                                          std::to_string(v + 1) + ")");
    }
    if (u == v) {
        throw SolverError(ErrorKind::InvalidArgument,
                          "self-loop at vertex " + std::to_string(u + 1));
    }
    if (find_edge(u, v) >= 0) {
        throw SolverError(ErrorKind::InvalidArgument, "duplicate edge (" + std::to_string(u + 1) +
                                                          "," + std::to_string(v + 1) + ")");
    }
    const int id = edge_count();
    edges_.push_back(Edge{id, u, v, weight});
    adjacency_[static_cast<std::size_t>(u)].push_back(id);
    adjacency_[static_cast<std::size_t>(v)].push_back(id);
    return id;
}

int WeightedGraph::find_edge(int u, int v) const {
    if (u < 0 || u >= vertex_count_) return -1;
    for (int id : adjacency_[static_cast<std::size_t>(u)]) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return id;
    }
    return -1;
}

std::int64_t WeightedGraph::min_weight() const {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const Edge& e : edges_) best = std::min(best, e.weight);
    return edges_.empty() ? 0 : best;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
        if (end > pos) fields.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return fields;
}

std::int64_t parse_integer(std::string_view token, int line_no, const char* what) {
    std::int64_t value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(line_no, std::string("invalid ") + what + " '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

WeightedGraph parse_instance(std::istream& in) {
    std::string line;
    int line_no = 0;
    bool have_header = false;
    std::int64_t declared_edges = 0;
    int header_line = 0;
    WeightedGraph g;

    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty() || fields[0] == "c") continue;

        if (fields[0] == "p") {
            if (have_header) throw ParseError(line_no, "duplicate problem line");
            if (fields.size() != 4 || fields[1] != "edge") {
                throw ParseError(line_no, "expected 'p edge <n> <m>'");
            }
            const std::int64_t n = parse_integer(fields[2], line_no, "vertex count");
            declared_edges = parse_integer(fields[3], line_no, "edge count");
            if (n <= 0 || n > std::numeric_limits<int>::max()) {
                throw ParseError(line_no, "vertex count must be positive");
            }
            if (declared_edges < 0) throw ParseError(line_no, "edge count must be non-negative");
            g = WeightedGraph(static_cast<int>(n));
            have_header = true;
            header_line = line_no;
        } else if (fields[0] == "e") {
            if (!have_header) throw ParseError(line_no, "edge line before problem line");
            if (fields.size() != 4) throw ParseError(line_no, "expected 'e <u> <v> <w>'");
            const std::int64_t u = parse_integer(fields[1], line_no, "endpoint");
            const std::int64_t v = parse_integer(fields[2], line_no, "endpoint");
            const std::int64_t w = parse_integer(fields[3], line_no, "weight");
            if (u < 1 || v < 1 || u > g.vertex_count() || v > g.vertex_count()) {
                throw ParseError(line_no, "endpoint out of range (" + std::to_string(u) + "," +
                                              std::to_string(v) + ")");
            }
            if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
            if (g.find_edge(static_cast<int>(u - 1), static_cast<int>(v - 1)) >= 0) {
                throw ParseError(line_no, "duplicate edge (" + std::to_string(u) + "," +
                                              std::to_string(v) + ")");
            }
            g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1), w);
        } else {
            throw ParseError(line_no, "unknown line type '" + std::string(fields[0]) + "'");
        }
    }
    if (!have_header) throw ParseError(line_no, "missing problem line");
    if (declared_edges != g.edge_count()) {
        throw ParseError(header_line, "declared " + std::to_string(declared_edges) +
                                          " edges but found " + std::to_string(g.edge_count()));
    }
    return g;
}

WeightedGraph parse_instance_string(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

WeightedGraph load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError(ErrorKind::InvalidArgument, "cannot open " + path);
    return parse_instance(in);
}

void print_instance(std::ostream& out, const WeightedGraph& g) {
    out << "p edge " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) {
        out << "e " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.weight << '\n';
    }
}

std::string print_instance_string(const WeightedGraph& g) {
    std::ostringstream out;
    print_instance(out, g);
    return out.str();
}

NoiseSource::NoiseSource(std::uint64_t seed) : engine_(seed) {}

std::uint64_t NoiseSource::below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // Largest multiple of bound that fits in 2^64; draws above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw > limit);
    return draw % bound;
}

PerturbedGraph perturb(const WeightedGraph& g, std::uint64_t seed, std::uint64_t noise_range) {
    if (noise_range < 1) throw SolverError(ErrorKind::InvalidArgument, "noise range must be >= 1");
    if (g.edge_count() == 0) throw SolverError(ErrorKind::InvalidArgument, "graph has no edges");

    PerturbedGraph p;
    p.base = g;
    p.seed = seed;
    p.noise_range = noise_range;
    p.weight_shift = std::max<std::int64_t>(0, 1 - g.min_weight());

    mpz_class range;
    mpz_import(range.get_mpz_t(), 1, 1, sizeof(noise_range), 0, 0, &noise_range);
    p.scale = range * g.edge_count() + 1;

    NoiseSource source(seed);
    p.noise.reserve(static_cast<std::size_t>(g.edge_count()));
    p.internal_weight.reserve(static_cast<std::size_t>(g.edge_count()));
    for (const Edge& e : g.edges()) {
        const std::uint64_t r = source.below(noise_range);
        mpz_class noise;
        mpz_import(noise.get_mpz_t(), 1, 1, sizeof(r), 0, 0, &r);
        const mpz_class shifted = mpz_class(static_cast<long>(e.weight)) + p.weight_shift;
        p.noise.push_back(r);
        p.internal_weight.emplace_back(shifted * p.scale + noise);
    }
    return p;
}

}  // namespace blossom_lp
