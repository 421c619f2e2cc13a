#include "blossom_lp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "blossom_lp/errors.hpp"

namespace blossom_lp {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Infeasible: return kExitInfeasible;
        case ErrorKind::NonUnique:
        case ErrorKind::NonConvergence:
        case ErrorKind::IterationBudgetExceeded: return kExitNoConvergence;
        default: return kExitUsage;
    }
}

namespace {

std::vector<std::pair<int, int>> sorted_pairs(const WeightedGraph& g, const std::vector<int>& matching) {
    std::vector<std::pair<int, int>> pairs;
    for (int id : matching) {
        const Edge& e = g.edge(id);
        pairs.emplace_back(std::min(e.u, e.v) + 1, std::max(e.u, e.v) + 1);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

nlohmann::ordered_json matching_pairs(const WeightedGraph& g, const std::vector<int>& matching) {
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& [u, v] : sorted_pairs(g, matching)) pairs.push_back({u, v});
    return pairs;
}

nlohmann::ordered_json config_json(const SolveConfig& cfg) {
    nlohmann::ordered_json c;
    c["backend"] = std::string(to_string(cfg.backend));
    c["seed"] = cfg.seed;
    c["noise_range"] = cfg.noise_range;
    if (cfg.max_outer_iterations) {
        c["max_outer_iterations"] = *cfg.max_outer_iterations;
    } else {
        c["max_outer_iterations"] = nullptr;
    }
    c["bp_max_rounds"] = cfg.bp.max_rounds;
    c["retry_limit"] = cfg.retry_limit;
    return c;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

nlohmann::ordered_json run_report(const WeightedGraph& g, const SolveConfig& cfg, const MatchingResult& r,
                                  const VerificationReport& verification,
                                  const std::optional<PhaseTimings>& timings) {
    nlohmann::ordered_json report;
    report["schema"] = kReportSchema;
    report["status"] = "ok";
    report["instance"] = {{"vertices", g.vertex_count()}, {"edges", g.edge_count()}};
    report["config"] = config_json(cfg);
    report["result"] = {
        {"weight", r.weight},
        {"matching", matching_pairs(g, r.matching)},
        {"outer_iterations", r.outer_iterations},
        {"contractions", r.contractions},
        {"expansions", r.expansions},
        {"bp_rounds_total", r.bp_rounds_total},
        {"seed_used", r.seed_used},
        {"attempts", r.attempts},
    };
    nlohmann::ordered_json v;
    v["ok"] = verification.ok;
    v["violations"] = verification.violations;
    if (verification.oracle_weight) {
        v["oracle_weight"] = *verification.oracle_weight;
    } else {
        v["oracle_weight"] = nullptr;
    }
    report["verification"] = v;
    if (timings) {
        report["timings_ms"] = {
            {"parse", timings->parse_ms}, {"solve", timings->solve_ms}, {"verify", timings->verify_ms}};
    }
    return report;
}

nlohmann::ordered_json trace_record(const IterationRecord& record) {
    nlohmann::ordered_json j;
    j["iteration"] = record.iteration;
    j["nodes"] = record.nodes;
    j["edges"] = record.edges;
    j["x"] = record.half_units;
    j["objective"] = record.objective;
    j["decision"] = record.decision;
    if (record.decision != "terminate") {
        nlohmann::ordered_json op;
        op["op"] = record.decision;
        op["blossom"] = record.blossom.value_or(-1);
        op["cycle"] = record.cycle;
        op["y"] = record.y;
        j["step"] = op;
    }
    if (!record.claws.empty()) j["claws"] = record.claws;
    j["bp_rounds"] = record.bp_rounds;
    return j;
}

std::string trace_jsonl(const MatchingResult& r) {
    std::string out;
    for (const IterationRecord& record : r.trace) {
        out += trace_record(record).dump();
        out += '\n';
    }
    return out;
}

std::vector<int> parse_matching(std::istream& in, const WeightedGraph& g) {
    std::vector<int> ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first) || first == "c" || first[0] == '#') continue;
        long u = 0;
        long v = 0;
        std::string rest;
        try {
            u = std::stol(first);
        } catch (const std::exception&) {
            throw ParseError(line_no, "expected '<u> <v>'");
        }
        if (!(fields >> v) || (fields >> rest)) throw ParseError(line_no, "expected '<u> <v>'");
        const int id = g.find_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
        if (id < 0) {
            throw ParseError(line_no, "(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
        }
        ids.push_back(id);
    }
    return ids;
}

namespace {

struct SolveFlags {
    std::string instance;
    std::string backend = "bp";
    std::uint64_t seed = 0;
    std::uint64_t noise_range = kDefaultNoiseRange;
    long max_outer = 0;
    int bp_max_rounds = 10000;
    int retry_limit = 8;
    int threads = 1;
    std::string trace_path;
    bool json = false;
    bool timings = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
    cmd->add_option("instance", f.instance, "instance file (p edge / e u v w format)")->required();
    cmd->add_option("--backend", f.backend, "relaxation backend")->check(CLI::IsMember({"bp", "enumerate"}));
    cmd->add_option("--seed", f.seed, "perturbation seed");
    cmd->add_option("--noise-range", f.noise_range, "noise values are drawn from [0, R)")->check(CLI::PositiveNumber);
    cmd->add_option("--max-outer", f.max_outer, "outer iteration budget (default 10|V|^2)")->check(CLI::PositiveNumber);
    cmd->add_option("--bp-max-rounds", f.bp_max_rounds, "min-sum round cap")->check(CLI::PositiveNumber);
    cmd->add_option("--retries", f.retry_limit, "re-perturbation retries")->check(CLI::NonNegativeNumber);
    cmd->add_option("--threads", f.threads, "min-sum worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--json", f.json, "print the JSON run report");
    cmd->add_flag("--timings", f.timings, "include wall-clock timings in the report");
}

SolveConfig make_config(const SolveFlags& f, bool trace) {
    SolveConfig cfg;
    cfg.backend = *parse_backend(f.backend);
    cfg.seed = f.seed;
    cfg.noise_range = f.noise_range;
    if (f.max_outer > 0) cfg.max_outer_iterations = f.max_outer;
    cfg.bp.max_rounds = f.bp_max_rounds;
    cfg.bp.threads = f.threads;
    cfg.retry_limit = f.retry_limit;
    cfg.trace = trace;
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw SolverError(ErrorKind::InvalidArgument, "cannot write " + path);
    file << content;
}

int run_solve(const SolveFlags& f, const std::string& trace_path, bool print_report, std::ostream& out,
              std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    const WeightedGraph g = load_instance(f.instance);
    PhaseTimings timings;
    timings.parse_ms = elapsed_ms(t0);

    const SolveConfig cfg = make_config(f, !trace_path.empty());
    MatchingResult result;
    try {
        const auto t1 = std::chrono::steady_clock::now();
        result = solve_mwpm(g, cfg);
        timings.solve_ms = elapsed_ms(t1);
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        if (f.json) {
            nlohmann::ordered_json report;
            report["schema"] = kReportSchema;
            report["status"] = std::string(to_string(e.kind()));
            report["message"] = e.what();
            out << report.dump(2) << '\n';
        }
        return exit_code_for(e.kind());
    }

    const auto t2 = std::chrono::steady_clock::now();
    const VerificationReport verification = verify_result(g, result);
    timings.verify_ms = elapsed_ms(t2);

    if (!trace_path.empty()) write_file(trace_path, trace_jsonl(result));
    if (!print_report) return kExitOk;
    if (f.json) {
        out << run_report(g, cfg, result, verification,
                          f.timings ? std::optional<PhaseTimings>(timings) : std::nullopt)
                   .dump(2)
            << '\n';
    } else {
        out << "weight " << result.weight << '\n';
        for (const auto& [u, v] : sorted_pairs(g, result.matching)) out << u << ' ' << v << '\n';
    }
    return kExitOk;
}

int run_verify(const std::string& instance, const std::string& matching_path, bool json, std::ostream& out,
               std::ostream& err) {
    const WeightedGraph g = load_instance(instance);
    std::ifstream in(matching_path);
    if (!in) throw SolverError(ErrorKind::InvalidArgument, "cannot open " + matching_path);
    const std::vector<int> matching = parse_matching(in, g);
    const VerificationReport report = verify_matching(g, matching, std::nullopt);
    if (json) {
        nlohmann::ordered_json j;
        j["schema"] = kReportSchema;
        j["ok"] = report.ok;
        j["violations"] = report.violations;
        if (report.oracle_weight) {
            j["oracle_weight"] = *report.oracle_weight;
        } else {
            j["oracle_weight"] = nullptr;
        }
        out << j.dump(2) << '\n';
    } else if (report.ok) {
        out << "ok\n";
    }
    if (!report.ok) {
        err << report.violations.front() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimum-weight perfect matching by blossom contraction over a half-integral relaxation"};
    app.name("blossom-lp");
    app.require_subcommand(1);

    SolveFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "solve an instance");
    add_solve_flags(solve, solve_flags);
    solve->add_option("--trace", solve_flags.trace_path, "write a JSON-lines iteration trace");

    std::string verify_instance;
    std::string verify_matching_path;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "check a matching against an instance");
    verify->add_option("instance", verify_instance, "instance file")->required();
    verify->add_option("matching", verify_matching_path, "matching file, one 'u v' pair per line")->required();
    verify->add_flag("--json", verify_json, "print a JSON report");

    SolveFlags trace_flags;
    std::string trace_output;
    auto* trace = app.add_subcommand("trace", "solve and write the iteration trace");
    add_solve_flags(trace, trace_flags);
    trace->add_option("output", trace_output, "trace output path")->required();

    std::vector<const char*> argv;
    argv.push_back("blossom-lp");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return run_solve(solve_flags, solve_flags.trace_path, true, out, err);
        if (verify->parsed()) return run_verify(verify_instance, verify_matching_path, verify_json, out, err);
        if (trace->parsed()) return run_solve(trace_flags, trace_output, trace_flags.json, out, err);
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    return kExitUsage;
}

}  // namespace blossom_lp
