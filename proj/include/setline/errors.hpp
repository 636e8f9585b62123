#pragma once

#include <stdexcept>
#include <string>

namespace setline {

// Structural or semantic invariant violated while building an expression.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};

// An operation was called outside its contract (e.g. lpt on a non-closed set).
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& m) : std::runtime_error(m) {}
};

// Syntax error with source position, thrown by the DSL parser.
struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& m, int line_, int col_)
        : std::runtime_error(m + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_), column(col_) {}
};

// The exact engine cannot decide this instance. Never a wrong answer:
// callers see an explicit failure instead of a silently approximate one.
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& m) : std::runtime_error(m) {}
};

} // namespace setline
