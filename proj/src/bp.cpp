#include "blossom_lp/bp.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <exception>
#include <map>
#include <numeric>
#include <optional>
#include <thread>

#include "blossom_lp/errors.hpp"

namespace blossom_lp {

FactorGraph build_gm(const ContractedGraph& cg) {
    FactorGraph fg;
    fg.factors.resize(cg.nodes.size());
    for (int i = 0; i < cg.node_count(); ++i) {
        if (cg.incident[static_cast<std::size_t>(i)].empty()) {
            throw SolverError(ErrorKind::Infeasible,
                              "no perfect matching: node " + cg.nodes[static_cast<std::size_t>(i)].label() + " is isolated");
        }
        BpFactor& f = fg.factors[static_cast<std::size_t>(i)];
        f.node = cg.nodes[static_cast<std::size_t>(i)];
        f.mode = cg.is_blossom(i) ? FactorMode::AtLeast2 : FactorMode::Exact2;
    }
    fg.variables.reserve(cg.edges.size() * 2);
    for (const ContractedEdge& e : cg.edges) {
        for (int copy = 0; copy < 2; ++copy) {
            BpVariable var;
            var.edge = e.id;
            var.copy = copy;
            var.cost = TieBreakCost(e.w_dagger, copy);
            var.factors[0] = e.a_index;
            var.factors[1] = e.b_index;
            const int id = static_cast<int>(fg.variables.size());
            for (int side = 0; side < 2; ++side) {
                auto& list = fg.factors[static_cast<std::size_t>(var.factors[side])].variables;
                var.slots[side] = static_cast<int>(list.size());
                list.push_back(id);
            }
            fg.variables.push_back(std::move(var));
        }
    }
    return fg;
}

MessageDelta combine(const MessageDelta& a, const MessageDelta& b) {
    using Kind = MessageDelta::Kind;
    if (a.kind == Kind::Finite && b.kind == Kind::Finite) return MessageDelta::finite(a.value + b.value);
    if (a.kind == Kind::Finite) return b;
    if (b.kind == Kind::Finite || a.kind == b.kind) return a;
    throw SolverError(ErrorKind::Infeasible, "no perfect matching: contradictory forced assignments");
}

std::vector<MessageDelta> factor_messages(FactorMode mode, const std::vector<MessageDelta>& incoming) {
    using Kind = MessageDelta::Kind;
    const int d = static_cast<int>(incoming.size());

    int forced_one = 0;
    std::vector<int> order;  // finite inputs, ascending by value
    for (int i = 0; i < d; ++i) {
        if (incoming[static_cast<std::size_t>(i)].kind == Kind::MinusInf) ++forced_one;
        if (incoming[static_cast<std::size_t>(i)].kind == Kind::Finite) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return incoming[static_cast<std::size_t>(a)].value < incoming[static_cast<std::size_t>(b)].value;
    });
    const int n_free = static_cast<int>(order.size());
    std::vector<int> position(static_cast<std::size_t>(d), -1);
    std::vector<TieBreakCost> prefix(static_cast<std::size_t>(n_free) + 1);
    int negatives = 0;
    for (int k = 0; k < n_free; ++k) {
        const TieBreakCost& v = incoming[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])].value;
        position[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
        prefix[static_cast<std::size_t>(k) + 1] = prefix[static_cast<std::size_t>(k)] + v;
        if (v.sign() < 0) ++negatives;
    }

    std::vector<MessageDelta> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int t = 0; t < d; ++t) {
        const MessageDelta& self = incoming[static_cast<std::size_t>(t)];
        const int pos = position[static_cast<std::size_t>(t)];
        const int forced = forced_one - (self.kind == Kind::MinusInf ? 1 : 0);
        const int free_count = n_free - (pos >= 0 ? 1 : 0);
        const bool self_negative = pos >= 0 && self.value.sign() < 0;
        const int negative_count = negatives - (self_negative ? 1 : 0);

        // Sum of the `count` smallest free inputs other than the target.
        auto smallest = [&](int count) -> TieBreakCost {
            if (pos < 0 || pos >= count) return prefix[static_cast<std::size_t>(count)];
            return prefix[static_cast<std::size_t>(count) + 1] - self.value;
        };
        auto best = [&](int c) -> std::optional<TieBreakCost> {
            const int need = 2 - c - forced;
            if (mode == FactorMode::Exact2) {
                if (need < 0 || need > free_count) return std::nullopt;
                return smallest(need);
            }
            const int k = std::max(need, 0);
            if (k > free_count) return std::nullopt;
            return smallest(std::max(k, negative_count));
        };
        const auto m0 = best(0);
        const auto m1 = best(1);
        if (m0 && m1) {
            out.push_back(MessageDelta::finite(*m1 - *m0));
        } else if (m0) {
            out.push_back(MessageDelta::plus_inf());
        } else if (m1) {
            out.push_back(MessageDelta::minus_inf());
        } else {
            throw SolverError(ErrorKind::Infeasible, "no perfect matching: a node constraint cannot be met");
        }
    }
    return out;
}

MessageDelta factor_to_variable(FactorMode mode, const std::vector<MessageDelta>& others) {
    std::vector<MessageDelta> incoming = others;
    incoming.push_back(MessageDelta::finite({}));
    return factor_messages(mode, incoming).back();
}

namespace {

BpDecision decide(const MessageDelta& belief) {
    switch (belief.kind) {
        case MessageDelta::Kind::MinusInf: return BpDecision::One;
        case MessageDelta::Kind::PlusInf: return BpDecision::Zero;
        case MessageDelta::Kind::Finite: break;
    }
    const int s = belief.value.sign();
    return s < 0 ? BpDecision::One : (s > 0 ? BpDecision::Zero : BpDecision::Tie);
}

// Runs body(i) for i in [0, n) on up to `threads` workers. Rethrows the
// exception of the lowest failing index so the outcome never depends on
// scheduling.
template <typename Body>
void parallel_for(int n, int threads, Body body) {
    if (threads <= 1 || n < 2 * threads) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::vector<std::thread> workers;
    const int chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&, begin, end] {
            for (int i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

using Messages = std::vector<std::array<MessageDelta, 2>>;

constexpr std::size_t kHistory = 256;

struct Snapshot {
    Messages messages;
    std::size_t primary_hash = 0;
};

std::size_t primary_hash(const Messages& m) {
    std::size_t h = 1469598103934665603ULL;
    auto mix = [&](std::size_t x) { h = (h ^ x) * 1099511628211ULL; };
    for (const auto& pair : m) {
        for (const MessageDelta& d : pair) {
            mix(static_cast<std::size_t>(d.kind));
            if (!d.is_finite()) continue;
            mix(mpz_get_ui(d.value.primary.numerator().get_mpz_t()));
            mix(static_cast<std::size_t>(d.value.primary.sign() + 1));
            mix(d.value.primary.exponent());
        }
    }
    return h;
}

bool same_primary(const Messages& a, const Messages& b) {
    for (std::size_t v = 0; v < a.size(); ++v) {
        for (std::size_t s = 0; s < 2; ++s) {
            if (a[v][s].kind != b[v][s].kind) return false;
            if (a[v][s].is_finite() && !(a[v][s].value.primary == b[v][s].value.primary)) return false;
        }
    }
    return true;
}

// Tie-break parts of a, b, c (p rounds apart) advance by equal steps.
bool even_drift(const Messages& a, const Messages& b, const Messages& c) {
    for (std::size_t v = 0; v < a.size(); ++v) {
        for (std::size_t s = 0; s < 2; ++s) {
            if (!a[v][s].is_finite()) continue;
            if (a[v][s].value.secondary - b[v][s].value.secondary !=
                b[v][s].value.secondary - c[v][s].value.secondary) {
                return false;
            }
        }
    }
    return true;
}

MessageDelta belief(const BpVariable& var, const std::array<MessageDelta, 2>& in) {
    return combine(combine(MessageDelta::finite(var.cost), in[0]), in[1]);
}

struct PeriodSum {
    int forced = 0;  // +1 forced to 0, -1 forced to 1, 2 both
    TieBreakCost total;
    mpz_class drift = 0;
};

// history[0] is the latest round; history[r] and history[r + period] share
// a residue. Copies of an edge always agree on the weight part, so an edge
// whose summed weight part is zero is a half edge and its copies are told
// apart by how far their tie-break parts move per period, then by the
// tie-break parts themselves.
std::vector<BpDecision> periodic_decisions(const FactorGraph& fg, const std::deque<Snapshot>& history, int period) {
    const std::size_t p = static_cast<std::size_t>(period);
    std::vector<PeriodSum> sums(fg.variables.size());
    for (std::size_t v = 0; v < fg.variables.size(); ++v) {
        const BpVariable& var = fg.variables[v];
        PeriodSum& sum = sums[v];
        for (std::size_t r = 0; r < p; ++r) {
            const MessageDelta now = belief(var, history[r].messages[v]);
            const int forced = now.kind == MessageDelta::Kind::PlusInf ? 1 : (now.kind == MessageDelta::Kind::MinusInf ? -1 : 0);
            if (forced != 0) sum.forced = sum.forced == 0 || sum.forced == forced ? forced : 2;
            if (!now.is_finite()) continue;
            sum.total += now.value;
            sum.drift += now.value.secondary - belief(var, history[r + p].messages[v]).value.secondary;
        }
        if (sum.forced == 2) throw SolverError(ErrorKind::NonConvergence, "min-sum beliefs oscillate");
    }

    std::vector<int> sibling(fg.variables.size(), -1);
    std::map<int, int> first_copy;
    for (std::size_t v = 0; v < fg.variables.size(); ++v) {
        const auto [it, inserted] = first_copy.emplace(fg.variables[v].edge, static_cast<int>(v));
        if (!inserted) {
            sibling[v] = it->second;
            sibling[static_cast<std::size_t>(it->second)] = static_cast<int>(v);
        }
    }

    std::vector<BpDecision> out(fg.variables.size());
    for (std::size_t v = 0; v < fg.variables.size(); ++v) {
        const PeriodSum& sum = sums[v];
        int sign = sum.forced != 0 ? sum.forced : sum.total.primary.sign();
        if (sign == 0 && sibling[v] >= 0) {
            const PeriodSum& other = sums[static_cast<std::size_t>(sibling[v])];
            sign = sgn(mpz_class(sum.drift - other.drift));
            if (sign == 0) sign = sgn(mpz_class(sum.total.secondary - other.total.secondary));
        }
        out[v] = sign < 0 ? BpDecision::One : (sign > 0 ? BpDecision::Zero : BpDecision::Tie);
    }
    if (std::find(out.begin(), out.end(), BpDecision::Tie) != out.end()) return out;
    for (const BpFactor& factor : fg.factors) {
        int ones = 0;
        for (int v : factor.variables) ones += out[static_cast<std::size_t>(v)] == BpDecision::One ? 1 : 0;
        if (factor.mode == FactorMode::Exact2 ? ones != 2 : ones < 2) {
            throw SolverError(ErrorKind::NonConvergence,
                              "periodic min-sum regime has no consistent reading at node " + factor.node.label());
        }
    }
    return out;
}

}  // namespace

MinSumResult run_min_sum(const FactorGraph& fg, const MinSumOptions& options) {
    const int n_vars = static_cast<int>(fg.variables.size());
    const int n_factors = static_cast<int>(fg.factors.size());
    const int window = options.stable_window > 0 ? options.stable_window : n_factors + 5;

    // to_variable[v][side]: message from factor variables[v].factors[side].
    Messages to_variable(static_cast<std::size_t>(n_vars));
    Messages to_factor(static_cast<std::size_t>(n_vars));

    MinSumResult result;
    std::vector<BpDecision> previous;
    int stable = 0;
    std::deque<Snapshot> history;
    int period = 0;
    int drifting = 0;
    auto finish = [&](std::vector<BpDecision> decisions, int round, int used_period) {
        if (std::find(decisions.begin(), decisions.end(), BpDecision::Tie) != decisions.end()) {
            throw SolverError(ErrorKind::NonUnique, "belief tie after " + std::to_string(round) + " rounds");
        }
        result.rounds = round;
        result.period = used_period;
        result.decisions = std::move(decisions);
        return result;
    };
    for (int round = 1; round <= options.max_rounds; ++round) {
        parallel_for(n_vars, options.threads, [&](int v) {
            const BpVariable& var = fg.variables[static_cast<std::size_t>(v)];
            auto& out = to_factor[static_cast<std::size_t>(v)];
            const auto& in = to_variable[static_cast<std::size_t>(v)];
            const MessageDelta own = MessageDelta::finite(var.cost);
            out[0] = combine(own, in[1]);
            out[1] = combine(own, in[0]);
        });

        parallel_for(n_factors, options.threads, [&](int f) {
            const BpFactor& factor = fg.factors[static_cast<std::size_t>(f)];
            std::vector<MessageDelta> incoming;
            incoming.reserve(factor.variables.size());
            for (int v : factor.variables) {
                const int side = fg.variables[static_cast<std::size_t>(v)].factors[0] == f ? 0 : 1;
                incoming.push_back(to_factor[static_cast<std::size_t>(v)][static_cast<std::size_t>(side)]);
            }
            std::vector<MessageDelta> out = factor_messages(factor.mode, incoming);
            for (std::size_t k = 0; k < factor.variables.size(); ++k) {
                const int v = factor.variables[k];
                const int side = fg.variables[static_cast<std::size_t>(v)].factors[0] == f ? 0 : 1;
                to_variable[static_cast<std::size_t>(v)][static_cast<std::size_t>(side)] = std::move(out[k]);
            }
        });

        std::vector<BpDecision> decisions(static_cast<std::size_t>(n_vars));
        for (int v = 0; v < n_vars; ++v) {
            decisions[static_cast<std::size_t>(v)] =
                decide(belief(fg.variables[static_cast<std::size_t>(v)], to_variable[static_cast<std::size_t>(v)]));
        }
        stable = decisions == previous ? stable + 1 : 1;
        previous = std::move(decisions);
        if (stable >= window) return finish(std::move(previous), round, 0);

        history.push_front({to_variable, primary_hash(to_variable)});
        if (history.size() > kHistory) history.pop_back();
        if (period == 0) {
            for (std::size_t k = 1; k < history.size(); ++k) {
                if (history[k].primary_hash == history[0].primary_hash &&
                    same_primary(history[k].messages, history[0].messages)) {
                    period = static_cast<int>(k);
                    break;
                }
            }
        }
        const auto p = static_cast<std::size_t>(period);
        if (period > 0 && history.size() > 2 * p) {
            drifting = even_drift(history[0].messages, history[p].messages, history[2 * p].messages) ? drifting + 1 : 0;
            if (drifting >= window + period) return finish(periodic_decisions(fg, history, period), round, period);
        }
    }
    throw SolverError(ErrorKind::NonConvergence,
                      "min-sum did not stabilise within " + std::to_string(options.max_rounds) + " rounds");
}

HalfIntegralSolution decode_half(const ContractedGraph& cg, const FactorGraph& fg,
                                 const std::vector<BpDecision>& decisions) {
    std::vector<std::uint8_t> half(cg.edges.size(), 0);
    for (std::size_t v = 0; v < fg.variables.size(); ++v) {
        if (decisions[v] == BpDecision::Tie) throw SolverError(ErrorKind::NonUnique, "cannot decode a tie");
        if (decisions[v] == BpDecision::One) ++half[static_cast<std::size_t>(fg.variables[v].edge)];
    }
    for (int i = 0; i < cg.node_count(); ++i) {
        int degree = 0;
        for (int e : cg.incident[static_cast<std::size_t>(i)]) degree += half[static_cast<std::size_t>(e)];
        const bool ok = cg.is_blossom(i) ? degree >= 2 : degree == 2;
        if (!ok) {
            throw SolverError(ErrorKind::Internal, "decoded assignment violates the constraint at node " +
                                                       cg.nodes[static_cast<std::size_t>(i)].label());
        }
    }
    TieBreakCost objective = solution_objective(cg, half);
    return {std::move(half), std::move(objective)};
}

HalfIntegralSolution bp_backend(const ContractedGraph& cg, const BpConfig& cfg, int* rounds) {
    const FactorGraph fg = build_gm(cg);
    MinSumOptions options;
    options.max_rounds = cfg.max_rounds;
    options.stable_window = cfg.stable_window.value_or(cg.node_count() + 5);
    options.threads = cfg.threads;
    const MinSumResult result = run_min_sum(fg, options);
    if (rounds) *rounds = result.rounds;
    return decode_half(cg, fg, result.decisions);
}

}  // namespace blossom_lp
