#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blossom_lp {

enum class ErrorKind {
    Parse,
    InvalidArgument,
    Infeasible,
    NonUnique,
    NonConvergence,
    IterationBudgetExceeded,
    Internal,
};

std::string_view to_string(ErrorKind kind);

class SolverError : public std::runtime_error {
public:
    SolverError(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Input-format error; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public SolverError {
public:
    ParseError(int line, const std::string& message)
        : SolverError(ErrorKind::Parse,
                      line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace blossom_lp
