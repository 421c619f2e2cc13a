#include "blossom_lp/relax.hpp"

#include <algorithm>

#include "blossom_lp/bp.hpp"
#include "blossom_lp/errors.hpp"

namespace blossom_lp {

bool HalfIntegralSolution::is_integral() const {
    return std::none_of(half_units.begin(), half_units.end(), [](std::uint8_t v) { return v == 1; });
}

TieBreakCost solution_objective(const ContractedGraph& cg, const std::vector<std::uint8_t>& half_units) {
    Dyadic twice;
    mpz_class full = 0;
    for (const ContractedEdge& e : cg.edges) {
        const auto v = half_units[static_cast<std::size_t>(e.id)];
        if (v >= 1) twice += e.w_dagger;
        if (v == 2) {
            twice += e.w_dagger;
            full += 1;
        }
    }
    return {twice.halved(), full};
}

std::string_view to_string(Backend backend) {
    return backend == Backend::BeliefPropagation ? "bp" : "enumerate";
}

std::optional<Backend> parse_backend(std::string_view name) {
    if (name == "bp") return Backend::BeliefPropagation;
    if (name == "enumerate") return Backend::Enumerate;
    return std::nullopt;
}

HalfIntegralSolution solve_relaxation(const ContractedGraph& cg, const RelaxConfig& cfg, RelaxStats* stats) {
    if (cg.nodes.empty()) throw SolverError(ErrorKind::InvalidArgument, "empty contracted graph");
    if (cfg.backend == Backend::Enumerate) return enumerate_backend(cg, cfg.enumerate_limit);
    int rounds = 0;
    HalfIntegralSolution x = bp_backend(cg, cfg.bp, &rounds);
    if (stats) stats->bp_rounds = rounds;
    return x;
}

namespace {

class Enumerator {
public:
    explicit Enumerator(const ContractedGraph& cg)
        : cg_(cg),
          sum_(cg.nodes.size(), 0),
          remaining_(cg.nodes.size(), 0),
          current_(cg.edges.size(), 0) {
        for (std::size_t i = 0; i < cg.nodes.size(); ++i) {
            remaining_[i] = static_cast<int>(cg.incident[i].size());
        }
    }

    void run() {
        for (std::size_t i = 0; i < cg_.nodes.size(); ++i) {
            if (remaining_[i] == 0) return;  // isolated node: nothing is feasible
        }
        search(0);
    }

    bool found() const { return best_.has_value(); }
    bool tied() const { return tied_; }
    const HalfIntegralSolution& best() const { return *best_; }

private:
    bool node_ok(int node) const {
        const int s = sum_[static_cast<std::size_t>(node)];
        const int r = remaining_[static_cast<std::size_t>(node)];
        if (s + 2 * r < 2) return false;
        if (!cg_.is_blossom(node)) {
            if (s > 2) return false;
            if (r == 0 && s != 2) return false;
        }
        return true;
    }

    void search(std::size_t e) {
        if (e == cg_.edges.size()) {
            HalfIntegralSolution x{current_, solution_objective(cg_, current_)};
            if (!best_ || x.objective < best_->objective) {
                best_ = std::move(x);
                tied_ = false;
            } else if (x.objective == best_->objective) {
                tied_ = true;
            }
            return;
        }
        const ContractedEdge& edge = cg_.edges[e];
        const auto a = static_cast<std::size_t>(edge.a_index);
        const auto b = static_cast<std::size_t>(edge.b_index);
        --remaining_[a];
        --remaining_[b];
        for (std::uint8_t v = 0; v <= 2; ++v) {
            current_[e] = v;
            sum_[a] += v;
            sum_[b] += v;
            if (node_ok(edge.a_index) && node_ok(edge.b_index)) search(e + 1);
            sum_[a] -= v;
            sum_[b] -= v;
        }
        current_[e] = 0;
        ++remaining_[a];
        ++remaining_[b];
    }

    const ContractedGraph& cg_;
    std::vector<int> sum_;
    std::vector<int> remaining_;
    std::vector<std::uint8_t> current_;
    std::optional<HalfIntegralSolution> best_;
    bool tied_ = false;
};

}  // namespace

HalfIntegralSolution enumerate_backend(const ContractedGraph& cg, std::size_t limit) {
    if (cg.edges.size() > limit) {
        throw SolverError(ErrorKind::InvalidArgument, "contracted graph has " + std::to_string(cg.edges.size()) +
                                                          " edges, enumerate limit is " + std::to_string(limit));
    }
    Enumerator search(cg);
    search.run();
    if (!search.found()) throw SolverError(ErrorKind::Infeasible, "no perfect matching");
    if (search.tied()) throw SolverError(ErrorKind::NonUnique, "relaxation optimum is not unique");
    return search.best();
}

std::optional<std::vector<Contract>> half_cycles(const ContractedGraph& cg,
                                                 const std::vector<std::uint8_t>& half_units) {
    std::vector<std::vector<int>> half_at(cg.nodes.size());
    for (const ContractedEdge& e : cg.edges) {
        if (half_units[static_cast<std::size_t>(e.id)] != 1) continue;
        half_at[static_cast<std::size_t>(e.a_index)].push_back(e.id);
        half_at[static_cast<std::size_t>(e.b_index)].push_back(e.id);
    }
    for (const auto& list : half_at) {
        if (!list.empty() && list.size() != 2) return std::nullopt;
    }

    std::vector<Contract> cycles;
    std::vector<char> used(cg.edges.size(), 0);
    for (const ContractedEdge& start : cg.edges) {
        if (half_units[static_cast<std::size_t>(start.id)] != 1 || used[static_cast<std::size_t>(start.id)]) continue;
        Contract c;
        c.node_indices.push_back(start.a_index);
        c.edge_ids.push_back(start.id);
        used[static_cast<std::size_t>(start.id)] = 1;
        int prev = start.id;
        int node = start.b_index;
        while (node != start.a_index) {
            c.node_indices.push_back(node);
            const auto& list = half_at[static_cast<std::size_t>(node)];
            const int next = list[0] == prev ? list[1] : list[0];
            if (used[static_cast<std::size_t>(next)]) return std::nullopt;
            used[static_cast<std::size_t>(next)] = 1;
            c.edge_ids.push_back(next);
            node = cg.other_end(next, node);
            prev = next;
        }
        cycles.push_back(std::move(c));
    }
    return cycles;
}

HalfValidationReport validate_half_integral(const ContractedGraph& cg, const HalfIntegralSolution& x) {
    HalfValidationReport report;
    auto fail = [&](std::string message) {
        report.valid = false;
        report.violations.push_back(std::move(message));
    };
    if (x.half_units.size() != cg.edges.size()) {
        fail("solution has " + std::to_string(x.half_units.size()) + " entries for " +
             std::to_string(cg.edges.size()) + " edges");
        return report;
    }
    for (std::size_t e = 0; e < x.half_units.size(); ++e) {
        if (x.half_units[e] > 2) {
            fail("edge " + std::to_string(e) + " value outside {0, 1/2, 1}");
            report.violating_edges.push_back(static_cast<int>(e));
        }
    }
    if (!report.valid) return report;

    for (int i = 0; i < cg.node_count(); ++i) {
        int degree = 0;
        for (int e : cg.incident[static_cast<std::size_t>(i)]) degree += x.half_units[static_cast<std::size_t>(e)];
        const bool ok = cg.is_blossom(i) ? degree >= 2 : degree == 2;
        if (!ok) {
            fail("node " + cg.nodes[static_cast<std::size_t>(i)].label() + " has degree " + std::to_string(degree) +
                 "/2");
            report.violating_nodes.push_back(i);
        }
    }

    const auto cycles = half_cycles(cg, x.half_units);
    if (!cycles) {
        fail("half edges do not form disjoint cycles");
        for (const ContractedEdge& e : cg.edges) {
            if (x.half_units[static_cast<std::size_t>(e.id)] == 1) report.violating_edges.push_back(e.id);
        }
        return report;
    }
    for (const Contract& c : *cycles) {
        if (c.edge_ids.size() % 2 == 0) {
            fail("even half cycle of length " + std::to_string(c.edge_ids.size()));
            report.violating_edges.insert(report.violating_edges.end(), c.edge_ids.begin(), c.edge_ids.end());
        }
        report.half_cycles.push_back(c.edge_ids);
    }
    if (!(x.objective == solution_objective(cg, x.half_units))) {
        fail("objective does not match the solution vector");
    }
    return report;
}

std::string_view decision_name(const StepDecision& d) {
    if (std::holds_alternative<Terminate>(d)) return "terminate";
    if (std::holds_alternative<Expand>(d)) return "expand";
    return "contract";
}

StepDecision classify(const ContractedGraph& cg, const HalfIntegralSolution& x) {
    std::vector<int> degree(cg.nodes.size(), 0);
    for (const ContractedEdge& e : cg.edges) {
        const int v = x.half_units[static_cast<std::size_t>(e.id)];
        degree[static_cast<std::size_t>(e.a_index)] += v;
        degree[static_cast<std::size_t>(e.b_index)] += v;
    }
    if (x.is_integral() && std::all_of(degree.begin(), degree.end(), [](int d) { return d == 2; })) {
        return Terminate{};
    }

    std::optional<NodeId> expand;
    for (int i = 0; i < cg.node_count(); ++i) {
        if (cg.is_blossom(i) && degree[static_cast<std::size_t>(i)] > 2) {
            const NodeId node = cg.nodes[static_cast<std::size_t>(i)];
            if (!expand || node.index < expand->index) expand = node;
        }
    }
    if (expand) return Expand{*expand};

    auto cycles = half_cycles(cg, x.half_units);
    if (cycles) {
        for (Contract& c : *cycles) {
            if (c.edge_ids.size() % 2 == 1) return std::move(c);
        }
    }
    throw SolverError(ErrorKind::Internal, "solution admits no terminate, expand or contract step");
}

}  // namespace blossom_lp
