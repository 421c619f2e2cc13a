#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blossom_lp/driver.hpp"
#include "blossom_lp/errors.hpp"
#include "blossom_lp/graph.hpp"

namespace blossom_lp {

inline constexpr int kReportSchema = 1;

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInfeasible = 2,
    kExitNoConvergence = 3,
};

int exit_code_for(ErrorKind kind);

struct PhaseTimings {
    double parse_ms = 0;
    double solve_ms = 0;
    double verify_ms = 0;
};

/// Machine-readable solve report. Timings are only included when given, so
/// that reports without them are byte-stable.
nlohmann::ordered_json run_report(const WeightedGraph& g, const SolveConfig& cfg, const MatchingResult& r,
                                  const VerificationReport& verification,
                                  const std::optional<PhaseTimings>& timings = std::nullopt);

nlohmann::ordered_json trace_record(const IterationRecord& record);

/// One JSON object per line, one line per outer iteration.
std::string trace_jsonl(const MatchingResult& r);

/// Reads `u v` pairs (1-based, one per line, `c`/`#` comments) and maps
/// them to edge ids. Throws ParseError on unknown pairs.
std::vector<int> parse_matching(std::istream& in, const WeightedGraph& g);

/// Entry point of the `blossom-lp` tool with subcommands solve, verify and
/// trace. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blossom_lp
