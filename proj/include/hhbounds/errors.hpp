#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hhbounds {

// Byte range [start, end) into the source text of an expression.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands disagree on dimension, or an index is out of range.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A value violates a construction invariant: non-finite coordinate,
// weight outside [0,1], degenerate box, unnormalized weights, ...
class InvariantError : public Error {
public:
    using Error::Error;
};

// Expression evaluation left the real domain (division by zero,
// sqrt of a negative, overflow to non-finite).
class EvalError : public Error {
public:
    using Error::Error;
};

// An enumeration or evaluation count would exceed its hard limit.
class BudgetError : public Error {
public:
    using Error::Error;
};

// A sampling-based check could not draw enough admissible samples
// to say anything.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, SourceSpan span)
        : Error(message), span_(span) {}

    SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

}  // namespace hhbounds
