#include "blossom_lp/driver.hpp"

#include <algorithm>
#include <string>

#include "blossom_lp/errors.hpp"
#include "blossom_lp/oracle.hpp"

namespace blossom_lp {

namespace {

bool retryable(ErrorKind kind) {
    return kind == ErrorKind::NonUnique || kind == ErrorKind::NonConvergence;
}

MatchingResult run_attempt(const WeightedGraph& g, const SolveConfig& cfg, std::uint64_t seed, long budget,
                           int attempt, const SolveObserver* observer) {
    const PerturbedGraph pg = perturb(g, seed, cfg.noise_range);
    SolverState state(pg);

    RelaxConfig relax;
    relax.backend = cfg.backend;
    relax.enumerate_limit = cfg.enumerate_limit;
    relax.bp = cfg.bp;

    MatchingResult result;
    result.seed_used = seed;
    for (long iteration = 1; iteration <= budget; ++iteration) {
        const ContractedGraph cg = build_contracted(state);
        RelaxStats stats;
        HalfIntegralSolution x;
        try {
            x = solve_relaxation(cg, relax, &stats);
        } catch (const SolverError& e) {
            if (observer && observer->on_relaxation_error) observer->on_relaxation_error(cg, e);
            throw;
        }
        result.bp_rounds_total += stats.bp_rounds;

        const HalfValidationReport check = validate_half_integral(cg, x);
        if (!check.valid) {
            const bool only_even = std::all_of(check.violations.begin(), check.violations.end(), [](const std::string& v) {
                return v.rfind("even half cycle", 0) == 0;
            });
            if (only_even) {
                throw SolverError(ErrorKind::NonUnique, "relaxation optimum is not unique: " + check.violations.front());
            }
            throw SolverError(ErrorKind::Internal, "relaxation solution is not half-integral: " + check.violations.front());
        }
        const StepDecision decision = classify(cg, x);
        if (observer && observer->on_iteration) {
            observer->on_iteration(IterationView{attempt, static_cast<int>(iteration), state, cg, x, decision});
        }
        result.outer_iterations = static_cast<int>(iteration);

        IterationRecord record;
        if (cfg.trace) {
            record.iteration = static_cast<int>(iteration);
            record.nodes = cg.node_count();
            record.edges = cg.edge_count();
            record.half_units = x.half_units;
            record.objective = x.objective.primary.to_decimal();
            record.decision = std::string(decision_name(decision));
            record.bp_rounds = stats.bp_rounds;
            for (const auto& claw : half_solution_to_decomposition(cg, x).claws) record.claws.push_back(claw.size() + 1);
        }

        if (std::holds_alternative<Terminate>(decision)) {
            result.matching = recover_matching(state, cg, x);
            std::sort(result.matching.begin(), result.matching.end());
            for (int id : result.matching) result.weight += g.edge(id).weight;
            if (cfg.trace) result.trace.push_back(std::move(record));
            return result;
        }

        if (const auto* expand = std::get_if<Expand>(&decision)) {
            if (cfg.trace) {
                record.blossom = expand->blossom.index;
                for (const NodeId& child : state.blossom(expand->blossom.index).cycle) {
                    record.cycle.push_back(child.label());
                }
            }
            expand_blossom(state, expand->blossom);
            ++result.expansions;
        } else {
            const auto& contract = std::get<Contract>(decision);
            std::vector<NodeId> nodes;
            std::vector<int> originals;
            std::vector<Dyadic> weights;
            for (int i : contract.node_indices) nodes.push_back(cg.nodes[static_cast<std::size_t>(i)]);
            for (int e : contract.edge_ids) {
                originals.push_back(cg.edges[static_cast<std::size_t>(e)].original);
                weights.push_back(cg.edges[static_cast<std::size_t>(e)].w_dagger);
            }
            const NodeId blossom = contract_cycle(state, nodes, originals, weights);
            ++result.contractions;
            if (observer && observer->on_contract) observer->on_contract(ContractionView{state, blossom, weights});
            if (cfg.trace) {
                record.blossom = blossom.index;
                for (const NodeId& node : nodes) {
                    record.cycle.push_back(node.label());
                    record.y.push_back(state.y_store().at(node).to_decimal());
                }
            }
        }
        if (cfg.trace) result.trace.push_back(std::move(record));
    }
    throw SolverError(ErrorKind::IterationBudgetExceeded,
                      "no termination within " + std::to_string(budget) + " outer iterations");
}

}  // namespace

MatchingResult solve_mwpm(const WeightedGraph& g, const SolveConfig& cfg, const SolveObserver* observer) {
    const int n = g.vertex_count();
    if (n % 2 != 0) throw SolverError(ErrorKind::Infeasible, "no perfect matching: odd vertex count");
    if (g.edge_count() == 0) throw SolverError(ErrorKind::Infeasible, "no perfect matching: graph has no edges");
    const long budget = cfg.max_outer_iterations.value_or(10L * n * n);
    if (budget < 1) throw SolverError(ErrorKind::InvalidArgument, "max outer iterations must be >= 1");

    std::uint64_t seed = cfg.seed;
    int retries = 0;
    bool budget_retry_used = false;
    for (int attempt = 1;; ++attempt) {
        try {
            MatchingResult result = run_attempt(g, cfg, seed, budget, attempt, observer);
            result.attempts = attempt;
            return result;
        } catch (const SolverError& e) {
            const bool retry_budget = e.kind() == ErrorKind::IterationBudgetExceeded && !budget_retry_used;
            const bool retry_noise = retryable(e.kind()) && retries < cfg.retry_limit;
            if (!retry_budget && !retry_noise) {
                if (retryable(e.kind()) && retries > 0) {
                    throw SolverError(e.kind(), std::string(e.what()) + " (after " + std::to_string(retries) + " retries)");
                }
                throw;
            }
            if (retry_budget) {
                budget_retry_used = true;
            } else {
                ++retries;
            }
            if (observer && observer->on_retry) observer->on_retry(e, attempt);
            ++seed;
        }
    }
}

VerificationReport verify_matching(const WeightedGraph& g, const std::vector<int>& matching,
                                   std::optional<std::int64_t> claimed_weight, int oracle_limit) {
    VerificationReport report;
    auto fail = [&](std::string message) {
        report.ok = false;
        report.violations.push_back(std::move(message));
    };
    std::vector<int> cover(static_cast<std::size_t>(g.vertex_count()), 0);
    std::int64_t sum = 0;
    for (int id : matching) {
        if (id < 0 || id >= g.edge_count()) {
            fail("edge " + std::to_string(id) + " is not in the graph");
            continue;
        }
        const Edge& e = g.edge(id);
        sum += e.weight;
        ++cover[static_cast<std::size_t>(e.u)];
        ++cover[static_cast<std::size_t>(e.v)];
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        const int c = cover[static_cast<std::size_t>(v)];
        if (c == 0) fail("vertex " + std::to_string(v + 1) + " uncovered");
        if (c > 1) fail("vertex " + std::to_string(v + 1) + " covered twice");
    }
    if (claimed_weight && *claimed_weight != sum) {
        fail("weight " + std::to_string(*claimed_weight) + " does not match edge sum " + std::to_string(sum));
    }
    if (g.vertex_count() <= oracle_limit && g.vertex_count() <= kOracleVertexLimit) {
        const auto optimum = exact_mwpm_dp(g);
        if (!optimum) {
            fail("graph has no perfect matching");
        } else {
            report.oracle_weight = optimum->weight;
            if (report.ok && optimum->weight != sum) {
                fail("weight " + std::to_string(sum) + " is not optimal (optimum " + std::to_string(optimum->weight) + ")");
            }
        }
    }
    return report;
}

VerificationReport verify_result(const WeightedGraph& g, const MatchingResult& r, int oracle_limit) {
    return verify_matching(g, r.matching, r.weight, oracle_limit);
}

}  // namespace blossom_lp
